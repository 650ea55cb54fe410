"""Triage HTTP API contract."""

from __future__ import annotations

import threading

import numpy as np
import pytest
from fastapi.testclient import TestClient
from PIL import Image

from astrack.breakage import CATEGORIES, TriageStore
from astrack.server import TriageContext, create_app


@pytest.fixture()
def ctx(tmp_path):
    shots = tmp_path / "shots"
    masks = tmp_path / "out" / "masks"
    masks.mkdir(parents=True)
    for site in ("alpha", "beta", "gamma"):
        d = shots / site
        d.mkdir(parents=True)
        arr = (np.random.default_rng(1).random((8, 8)) * 255).astype(np.uint8)
        Image.fromarray(arr, "L").save(d / "vanilla_a_1.png")
        Image.fromarray(arr, "L").save(d / "modified_1.png")
        Image.fromarray(arr, "L").save(masks / f"{site}.png")
    store = TriageStore(tmp_path / "out" / "triage_labels.jsonl")
    return TriageContext(
        screenshot_dir=shots, mask_dir=masks, store=store,
        suspicious=["alpha", "beta", "gamma"], frontend_dir=None)


@pytest.fixture()
def client(ctx):
    return TestClient(create_app(ctx))


def test_categories_endpoint(client):
    assert client.get("/api/categories").json() == list(CATEGORIES)


def test_sites_listing_and_status_flow(client):
    sites = client.get("/api/sites").json()
    assert [s["site_id"] for s in sites] == ["alpha", "beta", "gamma"]
    assert all(s["status"] == "UNREVIEWED" for s in sites)
    r = client.post("/api/sites/alpha/labels",
                    json={"categories": ["BROKEN"], "notes": "menu gone"})
    assert r.status_code == 200
    sites = client.get("/api/sites").json()
    by_id = {s["site_id"]: s for s in sites}
    assert by_id["alpha"]["status"] == "LABELED"
    assert by_id["alpha"]["categories"] == ["BROKEN"]
    assert by_id["beta"]["status"] == "UNREVIEWED"


def test_post_then_summary_reflects_label(client):
    client.post("/api/sites/alpha/labels", json={"categories": ["COOKIE"]})
    client.post("/api/sites/beta/labels",
                json={"categories": ["TRACKING", "BROKEN"]})
    summary = client.get("/api/summary").json()
    assert summary["counts"]["COOKIE"] == 1
    assert summary["counts"]["TRACKING"] == 1
    assert summary["counts"]["BROKEN"] == 1
    assert summary["labeled_sites"] == 2
    assert summary["total_sites"] == 3
    assert summary["broken_sites"] == 1


def test_empty_categories_rejected_with_400(client):
    r = client.post("/api/sites/alpha/labels", json={"categories": []})
    assert r.status_code == 400
    assert "categories" in str(r.json()["detail"])


def test_unknown_category_rejected(client):
    r = client.post("/api/sites/alpha/labels", json={"categories": ["NOPE"]})
    assert r.status_code == 400


def test_malformed_body_rejected_with_400(client):
    r = client.post("/api/sites/alpha/labels", json={"wrong": True})
    assert r.status_code == 400
    assert r.json()["errors"]


def test_unknown_site_404(client):
    assert client.get("/api/sites/nope/image/vanilla").status_code == 404
    r = client.post("/api/sites/nope/labels", json={"categories": ["MINOR"]})
    assert r.status_code == 404


def test_images_served(client):
    for kind in ("vanilla", "modified", "mask"):
        r = client.get(f"/api/sites/alpha/image/{kind}")
        assert r.status_code == 200
        assert r.headers["content-type"] == "image/png"
    assert client.get("/api/sites/alpha/image/wat").status_code == 404


def test_missing_mask_reported_and_404(ctx):
    (ctx.mask_dir / "gamma.png").unlink()
    client = TestClient(create_app(ctx))
    sites = {s["site_id"]: s for s in client.get("/api/sites").json()}
    assert sites["alpha"]["has_mask"] is True
    assert sites["gamma"]["has_mask"] is False
    assert client.get("/api/sites/gamma/image/mask").status_code == 404


def test_concurrent_label_posts_both_persisted(ctx):
    client = TestClient(create_app(ctx))
    errors = []

    def post(site):
        try:
            r = client.post(f"/api/sites/{site}/labels",
                            json={"categories": ["MINOR"]})
            assert r.status_code == 200
        except Exception as exc:  # pragma: no cover
            errors.append(exc)

    threads = [threading.Thread(target=post, args=(s,))
               for s in ("alpha", "beta", "alpha", "beta")]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    assert len(ctx.store.labels()) == 4


def test_fallback_page_without_frontend(client):
    r = client.get("/")
    assert r.status_code == 200
    assert "astrack triage" in r.text


def test_reload_reconstructs_state(ctx):
    client = TestClient(create_app(ctx))
    client.post("/api/sites/gamma/labels", json={"categories": ["MEDIA"]})
    # a fresh app over the same store sees the same truth
    fresh = TestClient(create_app(TriageContext(
        screenshot_dir=ctx.screenshot_dir, mask_dir=ctx.mask_dir,
        store=TriageStore(ctx.store.path), suspicious=ctx.suspicious)))
    summary = fresh.get("/api/summary").json()
    assert summary["counts"]["MEDIA"] == 1
