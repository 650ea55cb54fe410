"""Command-line drivers for the full pipeline.

Exit codes: 0 success, 2 validation error, 3 partial success (some
resources failed but the run completed).
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import figures
from .breakage import BreakageConfig, TriageStore
from .corpus import (
    CorpusManifest,
    FilterRuleSet,
    KeywordList,
    ManifestError,
    load_manifest,
)
from .fingerprint import read_records, write_records
from .graph import ClassificationReport, ClassifierConfig, GraphState, Label
from .graph import restore as restore_graph
from .graph import snapshot as snapshot_graph
from .pipeline import (
    build_graph,
    fingerprint_corpus,
    keyword_validation,
    run_breakage,
    tracking_counts_per_url,
)
from .prune import build_replacements
from .server import TriageContext, create_app

EXIT_VALIDATION = 2
EXIT_PARTIAL = 3

_out_option = click.option(
    "--out", envvar="ASTRACK_OUT", default="astrack-out", show_default=True,
    help="Output directory (env ASTRACK_OUT).")


def _load_manifest_or_die(path: str) -> CorpusManifest:
    try:
        return load_manifest(path)
    except ManifestError as exc:
        click.echo(f"manifest error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)


def _load_rules(path: str | None) -> FilterRuleSet:
    if path is None:
        return FilterRuleSet([])
    return FilterRuleSet.load(path)


def _load_keywords(path: str | None) -> KeywordList:
    if path is None:
        return KeywordList.default()
    return KeywordList.load(path)


@click.group()
@click.version_option(package_name="astrack")
def main():
    """Detect, prune, and triage web-tracking JavaScript by AST structure."""


@main.command()
@click.option("--manifest", required=True,
              type=click.Path(exists=True, dir_okay=False))
@_out_option
@click.option("--jobs", default=1, show_default=True, type=int,
              help="Parallel fingerprinting workers.")
def fingerprint(manifest, out, jobs):
    """Precompute structural fingerprints for every corpus resource."""
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    corpus = _load_manifest_or_die(manifest)
    records, failures = fingerprint_corpus(corpus, jobs=jobs)
    write_records(records, out_dir / "fingerprints.jsonl")
    with (out_dir / "parse_failures.jsonl").open("w", encoding="utf-8") as fh:
        for failure in failures:
            fh.write(json.dumps(failure) + "\n")
    click.echo(f"fingerprinted {len(records)} resource(s), "
               f"{len(failures)} failure(s) -> {out_dir / 'fingerprints.jsonl'}")
    if failures:
        sys.exit(EXIT_PARTIAL)


@main.command()
@click.option("--manifest", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--rules", type=click.Path(exists=True, dir_okay=False),
              help="Filter rule file for seed labels (manifest overrides win).")
@click.option("--keywords", type=click.Path(exists=True, dir_okay=False),
              help="Keyword list for validating newly found tracking URLs.")
@click.option("--mode", type=click.Choice(["static", "dynamic"]), default="static",
              show_default=True)
@click.option("--threshold", default=0.90, show_default=True,
              help="Tracking fraction needed to auto-classify an AST.")
@click.option("--min-support", default=10, show_default=True,
              help="Minimum distinct URLs carrying an AST before it can classify.")
@_out_option
@click.option("--jobs", default=1, show_default=True, type=int)
def classify(manifest, rules, keywords, mode, threshold, min_support, out, jobs):
    """Build the URL↔AST graph and classify tracking ASTs and URLs."""
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    corpus = _load_manifest_or_die(manifest)
    rule_set = _load_rules(rules)
    try:
        config = ClassifierConfig(
            tracking_fraction_threshold=threshold, min_url_support=min_support)
    except ValueError as exc:
        click.echo(f"invalid classifier config: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)

    fp_path = out_dir / "fingerprints.jsonl"
    failures: list[dict] = []
    if fp_path.exists():
        records = read_records(fp_path)
    else:
        records, failures = fingerprint_corpus(corpus, jobs=jobs)
        write_records(records, fp_path)

    events_path = out_dir / "events.jsonl"
    emit = None
    events_fh = None
    if mode == "dynamic":
        events_fh = events_path.open("w", encoding="utf-8")

        def emit(delta):
            events_fh.write(json.dumps({
                "url_id": delta.url_id,
                "new_tracking_asts": delta.new_tracking_asts,
                "relabeled_urls": delta.relabeled_urls,
            }) + "\n")

    try:
        state, report = build_graph(corpus, rule_set, records, config,
                                    mode=mode, emit=emit)
    finally:
        if events_fh is not None:
            events_fh.close()

    (out_dir / "report.jsonl").write_text(report.to_jsonl(), encoding="utf-8")
    (out_dir / "graph.snapshot").write_bytes(snapshot_graph(state))
    if report.new_tracking_urls:
        validation = keyword_validation(corpus, report, _load_keywords(keywords))
        (out_dir / "keyword_validation.json").write_text(
            json.dumps(validation, indent=2), encoding="utf-8")
    counts = tracking_counts_per_url(state)
    if counts:
        figures.save_tracking_ast_distribution(
            counts, out_dir / "tracking_ast_distribution.png")
    click.echo(
        f"{mode} classification: {len(report.tracking_asts)} tracking AST(s), "
        f"{len(report.new_tracking_urls)} new tracking URL(s) -> "
        f"{out_dir / 'report.jsonl'}")
    if failures:
        sys.exit(EXIT_PARTIAL)


@main.command()
@click.option("--manifest", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--report", "report_path", type=click.Path(exists=True, dir_okay=False),
              help="Classification report (defaults to OUT/report.jsonl).")
@_out_option
def prune(manifest, report_path, out):
    """Write cleaned replacement files for every tracking URL."""
    out_dir = Path(out)
    corpus = _load_manifest_or_die(manifest)
    report_file = Path(report_path) if report_path else out_dir / "report.jsonl"
    if not report_file.exists():
        click.echo(f"no classification report at {report_file}; run classify first",
                   err=True)
        sys.exit(EXIT_VALIDATION)
    report = ClassificationReport.from_jsonl(
        report_file.read_text(encoding="utf-8"))
    tracking_urls = None
    snapshot_file = out_dir / "graph.snapshot"
    if snapshot_file.exists():
        state: GraphState = restore_graph(snapshot_file.read_bytes())
        tracking_urls = {
            uid for uid, url in state.urls.items() if url.label is Label.TRACKING
        }
    result = build_replacements(
        corpus, report, out_dir / "replacements", tracking_urls=tracking_urls)
    (out_dir / "replacements.jsonl").write_text(result.serialize(), encoding="utf-8")
    click.echo(f"wrote {len(result.entries)} replacement(s), "
               f"skipped {len(result.skipped)} -> {out_dir / 'replacements.jsonl'}")
    if result.skipped:
        sys.exit(EXIT_PARTIAL)


@main.command()
@click.option("--screenshots", required=True,
              type=click.Path(exists=True, file_okay=False),
              help="Directory laid out as SITE/{vanilla_a,vanilla_b,modified}_RUN.png")
@_out_option
@click.option("--pair-mode", type=click.Choice(["paired", "all_pairs"]),
              default="paired", show_default=True)
@click.option("--intensity-threshold", default=0.0, show_default=True,
              help="Per-pixel difference below this is ignored in masks.")
@click.option("--labels", type=click.Path(dir_okay=False),
              help="Existing triage label log; enables per-category heatmaps.")
@click.option("--jobs", default=1, show_default=True, type=int,
              help="Parallel per-site analysis workers.")
def breakage(screenshots, out, pair_mode, intensity_threshold, labels, jobs):
    """Compare screenshot cohorts and flag suspected breakage."""
    out_dir = Path(out)
    config = BreakageConfig(pair_mode=pair_mode,
                            intensity_threshold=intensity_threshold)
    store = TriageStore(labels) if labels else None
    analyses, errors = run_breakage(screenshots, out_dir, config,
                                    triage_store=store, jobs=jobs)
    suspicious = [a.record.site_id for a in analyses.values() if a.record.suspicious]
    click.echo(f"analyzed {len(analyses)} site(s): {len(suspicious)} suspicious, "
               f"{len(errors)} error(s) -> {out_dir / 'report.csv'}")
    if errors:
        sys.exit(EXIT_PARTIAL)


@main.command("triage-serve")
@_out_option
@click.option("--screenshots", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--port", default=8400, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--frontend", type=click.Path(file_okay=False),
              help="Triage UI build directory (defaults to ./frontend/dist).")
def triage_serve(out, screenshots, port, host, frontend):
    """Serve the triage UI and its JSON API."""
    import uvicorn

    out_dir = Path(out)
    suspicious_file = out_dir / "suspicious.txt"
    if not suspicious_file.exists():
        click.echo(f"no suspicious list at {suspicious_file}; run breakage first",
                   err=True)
        sys.exit(EXIT_VALIDATION)
    suspicious = [
        line.strip() for line in
        suspicious_file.read_text(encoding="utf-8").splitlines() if line.strip()
    ]
    frontend_dir = Path(frontend) if frontend else Path("frontend/dist")
    ctx = TriageContext(
        screenshot_dir=Path(screenshots),
        mask_dir=out_dir / "masks",
        store=TriageStore(out_dir / "triage_labels.jsonl"),
        suspicious=suspicious,
        frontend_dir=frontend_dir if frontend_dir.exists() else None,
    )
    app = create_app(ctx)
    click.echo(f"serving triage on http://{host}:{port}/ "
               f"({len(suspicious)} suspicious site(s))")
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
