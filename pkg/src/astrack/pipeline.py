"""End-to-end pipeline steps shared by the CLI commands."""

from __future__ import annotations

import json
import statistics
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .breakage import (
    BreakageConfig,
    BreakageError,
    SiteAnalysis,
    TriageStore,
    analyze_site,
    heatmap,
    mask_overlay,
    scan_screenshot_dir,
    similarity_csv,
)
from .corpus import CorpusManifest, FilterRuleSet, KeywordList, keyword_scan, resolve_label
from .fingerprint import ParseError, fingerprint_record, fingerprint_source, record_ids
from .graph import ClassificationReport, ClassifierConfig, GraphState, Label, UrlRecord
from .html import ScriptOrigin, extract_scripts
from .labels import default_table
from .prune import JS_CONTENT_TYPES

HTML_CONTENT_TYPES = frozenset(["text/html", "application/xhtml+xml"])


def url_of_resource(resource_id: str) -> str:
    return resource_id.split("::inline", 1)[0]


def _normalize_type(content_type: str) -> str:
    return content_type.split(";")[0].strip().lower()


def fingerprint_payload(payload: tuple[str, str, str]) -> tuple[list[dict], list[dict]]:
    """(url, body, content_type) → (records, failures); module-level so a
    process pool can ship it."""
    url, body, content_type = payload
    table = default_table()
    kind = _normalize_type(content_type)
    records: list[dict] = []
    failures: list[dict] = []
    if kind in JS_CONTENT_TYPES:
        try:
            records.append(fingerprint_record(fingerprint_source(body, table, url)))
        except ParseError as exc:
            failures.append({"resource_id": url, "error": str(exc)})
    elif kind in HTML_CONTENT_TYPES:
        inline = [s for s in extract_scripts(body) if s.origin is ScriptOrigin.INLINE]
        for i, script in enumerate(inline):
            resource_id = f"{url}::inline{i}"
            try:
                records.append(fingerprint_record(
                    fingerprint_source(script.text, table, resource_id)))
            except ParseError as exc:
                failures.append({"resource_id": resource_id, "error": str(exc)})
    return records, failures


def fingerprint_corpus(manifest: CorpusManifest, jobs: int = 1):
    """Fingerprint every manifest resource; returns (records, failures)."""
    payloads = []
    failures: list[dict] = []
    for entry in manifest.entries:
        kind = _normalize_type(entry.content_type)
        if kind not in JS_CONTENT_TYPES and kind not in HTML_CONTENT_TYPES:
            continue
        try:
            payloads.append((entry.url, manifest.body(entry), entry.content_type))
        except OSError as exc:
            failures.append({"resource_id": entry.url, "error": f"read error: {exc}"})
    records: list[dict] = []
    if jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(fingerprint_payload, payloads, chunksize=8))
    else:
        results = [fingerprint_payload(p) for p in payloads]
    for recs, fails in results:
        records.extend(recs)
        failures.extend(fails)
    return records, failures


def url_ast_ids(records: list[dict]) -> dict[str, set[str]]:
    """Group serialized fingerprint records into per-URL AST id sets."""
    grouped: dict[str, set[str]] = {}
    for record in records:
        grouped.setdefault(url_of_resource(record["resource_id"]), set()).update(
            record_ids(record))
    return grouped


def build_graph(
    manifest: CorpusManifest,
    rules: FilterRuleSet,
    records: list[dict],
    config: ClassifierConfig,
    mode: str = "static",
    emit=None,
) -> tuple[GraphState, ClassificationReport]:
    """STATIC: build everything, then run the fixpoint. DYNAMIC: insert in
    ascending rank (manifest order within equal ranks) with immediate
    propagation; `emit` receives each non-trivial delta."""
    if mode not in ("static", "dynamic"):
        raise ValueError("mode must be 'static' or 'dynamic'")
    ids_by_url = url_ast_ids(records)
    state = GraphState(config)
    entries = manifest.entries
    if mode == "dynamic":
        entries = sorted(entries, key=lambda e: e.rank)
    for entry in entries:
        record = UrlRecord(
            url_id=entry.url, domain=entry.domain, rank=entry.rank,
            label=resolve_label(entry, rules),
            ast_ids=ids_by_url.get(entry.url, set()),
        )
        delta = state.add_url(record, propagate=(mode == "dynamic"))
        if emit is not None and (delta.new_tracking_asts or delta.relabeled_urls):
            emit(delta)
    if mode == "static":
        report = state.classify_fixpoint()
    else:
        report = state.report(iterations=0)
    return state, report


def keyword_validation(
    manifest: CorpusManifest,
    report: ClassificationReport,
    keywords: KeywordList,
) -> dict:
    """Scan the resources of newly found tracking URLs for tracking-related
    keywords; the classic plausibility check on propagation output."""
    by_url = manifest.by_url()
    per_url = []
    matched_counts = []
    for url, _origin in report.new_tracking_urls:
        entry = by_url.get(url)
        if entry is None:
            continue
        kind = _normalize_type(entry.content_type)
        if kind not in JS_CONTENT_TYPES and kind not in HTML_CONTENT_TYPES:
            continue
        try:
            body = manifest.body(entry)
        except OSError:
            continue
        scan = keyword_scan(body, keywords)
        per_url.append({
            "url": url,
            "matched": sorted(scan.matched),
            "counts": scan.counts,
        })
        if scan.matched:
            matched_counts.append(len(scan.matched))
    return {
        "files_checked": len(per_url),
        "files_with_keywords": len(matched_counts),
        "median_keywords_per_matching_file":
            statistics.median(matched_counts) if matched_counts else 0,
        "per_url": per_url,
    }


def tracking_counts_per_url(state: GraphState) -> list[int]:
    tracking = state.tracking_ast_ids()
    counts = []
    for url in state.urls.values():
        if url.label is Label.TRACKING:
            n = len(url.ast_ids & tracking)
            if n:
                counts.append(n)
    return counts


# -- breakage ---------------------------------------------------------------


def _analyze_one(args) -> tuple[str, SiteAnalysis | None, str | None]:
    site_id, shots, config = args
    try:
        return site_id, analyze_site(site_id, shots, config), None
    except BreakageError as exc:
        return site_id, None, str(exc)


def run_breakage(
    screenshot_dir,
    out_dir,
    config: BreakageConfig | None = None,
    triage_store: TriageStore | None = None,
    write_figures: bool = True,
    jobs: int = 1,
):
    """Six-step run over a screenshot directory: similarity CSV, suspicious
    list, red-overlay masks, and (given triage labels) the per-category
    difference heatmaps. Returns the analyses keyed by site."""
    from . import figures

    config = config or BreakageConfig()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    mask_dir = out_dir / "masks"
    analyses: dict[str, SiteAnalysis] = {}
    errors: dict[str, str] = {}
    work = [(site_id, shots, config)
            for site_id, shots in scan_screenshot_dir(screenshot_dir).items()]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_analyze_one, work))
    else:
        results = [_analyze_one(item) for item in work]
    for site_id, analysis, error in results:
        if analysis is not None:
            analyses[site_id] = analysis
        else:
            errors[site_id] = error or "unknown failure"
    records = [a.record for a in analyses.values()]
    n_runs = max((len(r.vanilla_sims) for r in records), default=0)
    (out_dir / "report.csv").write_text(similarity_csv(records, n_runs),
                                        encoding="utf-8")
    suspicious = sorted(a.record.site_id for a in analyses.values()
                        if a.record.suspicious)
    (out_dir / "suspicious.txt").write_text(
        "".join(s + "\n" for s in suspicious), encoding="utf-8")
    if errors:
        (out_dir / "breakage_errors.jsonl").write_text(
            "".join(json.dumps({"site_id": k, "error": v}) + "\n"
                    for k, v in sorted(errors.items())),
            encoding="utf-8")
    for site_id in suspicious:
        analysis = analyses[site_id]
        if analysis.mask is None:
            continue
        mask_dir.mkdir(exist_ok=True)
        mask_overlay(analysis.mask, analysis.base).save(mask_dir / f"{site_id}.png")
    if write_figures and records:
        figures.save_similarity_cdf(records, out_dir / "similarity_cdf.png")
    if triage_store is not None:
        render_heatmaps(analyses, triage_store, out_dir / "heatmaps")
    return analyses, errors


def render_heatmaps(analyses: dict[str, SiteAnalysis], store: TriageStore,
                    out_dir) -> list[Path]:
    from . import figures

    out_dir = Path(out_dir)
    by_category: dict[str, list] = {}
    for site_id, labels in store.labels_by_site().items():
        analysis = analyses.get(site_id)
        if analysis is None or analysis.mask is None:
            continue
        for category in {c for label in labels for c in label.categories}:
            by_category.setdefault(category, []).append(analysis.mask)
    written = []
    for category, masks in sorted(by_category.items()):
        out_dir.mkdir(parents=True, exist_ok=True)
        grid = heatmap(masks)
        written.append(figures.save_heatmap(
            grid, out_dir / f"{category.lower()}.png",
            f"{category.title()}: differing-pixel distribution ({len(masks)} sites)"))
    return written
