"""HTTP service backing the triage UI.

Serves the suspicious-site queue, screenshot/mask images, the append-only
label log, and per-category summary counts. The single-page frontend is
served from / when its build directory exists; the API works without it.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import FileResponse, HTMLResponse, JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .breakage import CATEGORIES, TriageLabel, TriageStore

_FALLBACK_PAGE = """<!doctype html>
<html><head><title>astrack triage</title></head>
<body><h1>astrack triage API</h1>
<p>The triage frontend build was not found. The JSON API is live under
<code>/api</code>: sites, summary, categories, images, labels.</p>
</body></html>"""


@dataclass
class TriageContext:
    screenshot_dir: Path
    mask_dir: Path
    store: TriageStore
    suspicious: list[str]
    frontend_dir: Path | None = None


class LabelPayload(BaseModel):
    categories: list[str]
    notes: str = ""
    labeler: str = ""


def _first_shot(site_dir: Path, variant: str) -> Path | None:
    if not site_dir.is_dir():
        return None
    shots = sorted(site_dir.glob(f"{variant}_*.png"))
    return shots[0] if shots else None


def create_app(ctx: TriageContext) -> FastAPI:
    app = FastAPI(title="astrack triage", docs_url=None, redoc_url=None)

    @app.exception_handler(RequestValidationError)
    async def invalid_payload(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"detail": "invalid label payload", "errors": exc.errors()},
        )

    def site_known(site_id: str) -> None:
        if site_id not in ctx.suspicious:
            raise HTTPException(status_code=404, detail=f"unknown site {site_id!r}")

    @app.get("/api/categories")
    def categories():
        return list(CATEGORIES)

    @app.get("/api/sites")
    def sites():
        by_site = ctx.store.labels_by_site()
        out = []
        for site_id in ctx.suspicious:
            labels = by_site.get(site_id, [])
            cats = sorted({c for label in labels for c in label.categories})
            out.append({
                "site_id": site_id,
                "status": "LABELED" if cats else "UNREVIEWED",
                "categories": cats,
                "has_mask": (ctx.mask_dir / f"{site_id}.png").exists(),
                "images": {
                    "vanilla": f"/api/sites/{site_id}/image/vanilla",
                    "modified": f"/api/sites/{site_id}/image/modified",
                    "mask": f"/api/sites/{site_id}/image/mask",
                },
            })
        return out

    @app.get("/api/sites/{site_id}/image/{kind}")
    def image(site_id: str, kind: str):
        site_known(site_id)
        if kind == "mask":
            path = ctx.mask_dir / f"{site_id}.png"
        elif kind == "vanilla":
            path = _first_shot(ctx.screenshot_dir / site_id, "vanilla_a")
        elif kind == "modified":
            path = _first_shot(ctx.screenshot_dir / site_id, "modified")
        else:
            raise HTTPException(status_code=404, detail=f"unknown image kind {kind!r}")
        if path is None or not path.exists():
            raise HTTPException(status_code=404, detail=f"no {kind} image for {site_id}")
        return FileResponse(path, media_type="image/png")

    @app.post("/api/sites/{site_id}/labels")
    def post_labels(site_id: str, payload: LabelPayload):
        site_known(site_id)
        errors = {}
        if not payload.categories:
            errors["categories"] = "at least one category required"
        unknown = [c for c in payload.categories if c not in CATEGORIES]
        if unknown:
            errors["categories"] = f"unknown categories: {unknown}"
        if errors:
            raise HTTPException(status_code=400, detail=errors)
        label = TriageLabel(
            site_id=site_id, categories=frozenset(payload.categories),
            notes=payload.notes, labeler=payload.labeler,
        )
        ctx.store.append(label)
        return {"ok": True, "site_id": site_id, "categories": sorted(label.categories)}

    @app.get("/api/summary")
    def summary():
        counts = ctx.store.summary()
        labeled = {
            s for s, labels in ctx.store.labels_by_site().items() if labels
        }
        return {
            "counts": counts,
            "total_sites": len(ctx.suspicious),
            "labeled_sites": len(labeled & set(ctx.suspicious)),
            "broken_sites": ctx.store.broken_site_count(),
        }

    if ctx.frontend_dir is not None and (ctx.frontend_dir / "index.html").exists():
        app.mount("/", StaticFiles(directory=str(ctx.frontend_dir), html=True),
                  name="frontend")
    else:
        @app.get("/", response_class=HTMLResponse)
        def index():
            return _FALLBACK_PAGE

    return app
