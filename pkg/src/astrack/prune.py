"""Selective removal of tracking subtrees from JavaScript sources.

Targets are neutralized rather than excised: declarations and methods keep
their signatures with an emptied body so call sites still resolve, and
expression-position functions become inert empty functions. Only raw byte
spans of targeted subtrees are touched; everything else stays byte-exact.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import CorpusManifest
from .fingerprint import (
    FUNCTION_TYPES,
    FileFingerprint,
    ParseError,
    _byte_offsets,
    fingerprint_source,
    fingerprint_tree,
    hash_chain,
)
from .graph import ClassificationReport
from .jsparse import parse
from .labels import LabelTable, default_table

INERT_FUNCTION = "function(){}"
EMPTY_BODY = "{}"

JS_CONTENT_TYPES = frozenset([
    "application/javascript", "application/x-javascript", "text/javascript",
    "application/ecmascript", "text/ecmascript", "module",
])


class PruneError(Exception):
    pass


@dataclass(frozen=True)
class PruneRequest:
    source: str
    file_fp: FileFingerprint
    tracking_ids: frozenset[str]


@dataclass
class RemovedSpan:
    ast_id: str
    span: tuple[int, int]  # byte offsets in the original source
    replaced_with: str  # "STUB" | "DELETED"


@dataclass
class PruneReport:
    removed: list[RemovedSpan] = field(default_factory=list)
    subsumed_ids: set[str] = field(default_factory=set)
    ignored_ids: set[str] = field(default_factory=set)
    output_parses: bool = False
    residual_tracking: set[str] = field(default_factory=set)

    @property
    def removed_bytes(self) -> int:
        return sum(r.span[1] - r.span[0] for r in self.removed)


def _parent_map(tree: dict) -> dict[int, dict]:
    parents: dict[int, dict] = {}
    stack = [tree]
    while stack:
        node = stack.pop()
        for key, value in node.items():
            if key == "type":
                continue
            if isinstance(value, dict) and "type" in value:
                parents[id(value)] = node
                stack.append(value)
            elif isinstance(value, list):
                for item in value:
                    if isinstance(item, dict) and "type" in item:
                        parents[id(item)] = node
                        stack.append(item)
    return parents


def _is_method_value(node: dict, parents: dict[int, dict]) -> bool:
    parent = parents.get(id(node))
    if parent is None:
        return False
    if parent["type"] == "MethodDefinition" and parent.get("value") is node:
        return True
    if parent["type"] == "Property" and parent.get("value") is node:
        return bool(parent.get("method")) or parent.get("kind") in ("get", "set")
    return False


def prune(request: PruneRequest, table: LabelTable | None = None) -> tuple[str, PruneReport]:
    """Neutralize every targeted subtree; the output always reparses and
    re-fingerprints without any targeted id."""
    if table is None:
        table = default_table()
    source = request.source
    tree = parse(source)
    chain, records = fingerprint_tree(tree, table)
    root_id = hash_chain(chain)
    if root_id != request.file_fp.root.id:
        raise PruneError("fingerprint does not match this source")

    present = {root_id}
    id_of: dict[int, str] = {}
    parent_func: dict[int, dict | None] = {}
    for node, start, end, parent in records:
        fid = hash_chain(chain[start:end])
        id_of[id(node)] = fid
        parent_func[id(node)] = parent
        present.add(fid)

    report = PruneReport()
    report.ignored_ids = set(request.tracking_ids) - present
    targets = set(request.tracking_ids) & present

    if not targets:
        report.output_parses = True
        return source, report

    byte_of = _byte_offsets(source)

    def bspan(a: int, b: int) -> tuple[int, int]:
        if byte_of is None:
            return (a, b)
        return (byte_of[a], byte_of[b])

    if root_id in targets:
        report.removed.append(RemovedSpan(root_id, bspan(0, len(source)), "DELETED"))
        report.subsumed_ids = targets - {root_id}
        cleaned = ""
        _finish(cleaned, request, report, table)
        return cleaned, report

    target_nodes = [node for node, *_ in records if id_of[id(node)] in targets]
    top_level: list[dict] = []
    for node in target_nodes:
        ancestor = parent_func[id(node)]
        subsumed = False
        while ancestor is not None:
            if id_of[id(ancestor)] in targets:
                subsumed = True
                break
            ancestor = parent_func[id(ancestor)]
        if subsumed:
            report.subsumed_ids.add(id_of[id(node)])
        else:
            top_level.append(node)

    parents = _parent_map(tree)
    edits: list[tuple[int, int, str, str, str]] = []  # start, end, text, ast_id, kind
    for node in top_level:
        fid = id_of[id(node)]
        if node["type"] == "FunctionDeclaration" or _is_method_value(node, parents):
            body = node["body"]
            edits.append((body["start"], body["end"], EMPTY_BODY, fid, "STUB"))
        else:
            edits.append((node["start"], node["end"], INERT_FUNCTION, fid, "STUB"))

    edits.sort(key=lambda e: e[0], reverse=True)
    cleaned = source
    for start, end, text, _fid, _kind in edits:
        cleaned = cleaned[:start] + text + cleaned[end:]
    for start, end, _text, fid, kind in sorted(edits, key=lambda e: e[0]):
        report.removed.append(RemovedSpan(fid, bspan(start, end), kind))

    _finish(cleaned, request, report, table)
    return cleaned, report


def _finish(cleaned: str, request: PruneRequest, report: PruneReport,
            table: LabelTable) -> None:
    try:
        out_fp = fingerprint_source(cleaned, table, request.file_fp.resource_id)
    except ParseError as exc:
        raise PruneError(f"pruned output does not parse: {exc}") from exc
    report.output_parses = True
    report.residual_tracking = set(request.tracking_ids) & out_fp.all_ids()
    if report.residual_tracking:
        raise PruneError(
            "targeted ids survive pruning (stub fingerprint collides with a target): "
            + ", ".join(sorted(report.residual_tracking)))


# -- corpus-wide replacements ---------------------------------------------------


@dataclass
class ReplacementEntry:
    url: str
    original_sha256: str
    replacement_path: str
    removed_ast_count: int
    removed_bytes: int

    def to_dict(self) -> dict:
        return {
            "url": self.url, "original_sha256": self.original_sha256,
            "replacement_path": self.replacement_path,
            "removed_ast_count": self.removed_ast_count,
            "removed_bytes": self.removed_bytes,
        }


@dataclass
class ReplacementManifest:
    entries: list[ReplacementEntry] = field(default_factory=list)
    skipped: list[tuple[str, str]] = field(default_factory=list)  # (url, reason)

    def serialize(self) -> str:
        lines = [json.dumps(e.to_dict()) for e in self.entries]
        lines.extend(
            json.dumps({"url": url, "skipped": reason}) for url, reason in self.skipped
        )
        return "\n".join(lines) + ("\n" if lines else "")


def build_replacements(
    manifest: CorpusManifest,
    report: ClassificationReport,
    out_dir,
    tracking_urls: set[str] | None = None,
    table: LabelTable | None = None,
) -> ReplacementManifest:
    """Write a cleaned, content-addressed file for every tracking URL whose
    resource is JavaScript. `tracking_urls` normally comes from the graph
    after classification; when omitted it is derived from manifest labels
    plus the report's newly tracking URLs."""
    if table is None:
        table = default_table()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tracking_ids = frozenset(aid for aid, _s, _t in report.tracking_asts)
    if tracking_urls is None:
        tracking_urls = {url for url, _origin in report.new_tracking_urls}
        tracking_urls.update(
            e.url for e in manifest.entries if e.declared_label == "TRACKING")
    result = ReplacementManifest()
    for entry in manifest.entries:
        if entry.url not in tracking_urls:
            continue
        if entry.content_type.split(";")[0].strip().lower() not in JS_CONTENT_TYPES:
            result.skipped.append((entry.url, f"not JavaScript: {entry.content_type}"))
            continue
        try:
            source = manifest.body(entry)
        except OSError as exc:
            result.skipped.append((entry.url, f"read error: {exc}"))
            continue
        try:
            fp = fingerprint_source(source, table, resource_id=entry.url)
        except ParseError as exc:
            result.skipped.append((entry.url, f"parse error: {exc}"))
            continue
        request = PruneRequest(source=source, file_fp=fp,
                               tracking_ids=tracking_ids)
        try:
            cleaned, prune_report = prune(request, table)
        except PruneError as exc:
            result.skipped.append((entry.url, f"prune error: {exc}"))
            continue
        digest = hashlib.sha256(cleaned.encode("utf-8")).hexdigest()
        replacement = out_dir / f"{digest[:24]}.js"
        replacement.write_text(cleaned, encoding="utf-8")
        result.entries.append(ReplacementEntry(
            url=entry.url,
            original_sha256=hashlib.sha256(source.encode("utf-8")).hexdigest(),
            replacement_path=str(replacement),
            removed_ast_count=len(prune_report.removed) + len(prune_report.subsumed_ids),
            removed_bytes=prune_report.removed_bytes,
        ))
    return result
