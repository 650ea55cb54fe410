"""Bipartite URL↔AST graph: safety values, blocking, and propagation.

URLs arrive labeled SAFE or TRACKING (seeded from filter lists). Every AST
they carry accumulates a per-label count; its safety value is the safe count
minus the tracking count. An AST carried by enough URLs, almost all of them
tracking, is auto-classified as tracking; that in turn relabels the safe
URLs carrying it, whose other ASTs then lose safety, cascading to a
fixpoint. Both an incremental one-URL-at-a-time mode and a batch fixpoint
over a fully built graph are supported.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum

SNAPSHOT_VERSION = "astrack-graph/1"


class GraphError(Exception):
    pass


class NotFound(GraphError):
    pass


class DuplicateInsert(GraphError):
    pass


class InvalidQuery(GraphError):
    pass


class SnapshotError(GraphError):
    pass


class Label(str, Enum):
    SAFE = "SAFE"
    TRACKING = "TRACKING"


class LabelOrigin(str, Enum):
    FILTER_LIST = "FILTER_LIST"
    PROPAGATED = "PROPAGATED"


class Classification(str, Enum):
    UNKNOWN = "UNKNOWN"
    TRACKING = "TRACKING"


class Decision(str, Enum):
    ALLOW = "ALLOW"
    BLOCK = "BLOCK"


@dataclass
class UrlRecord:
    url_id: str
    domain: str
    rank: int
    label: Label
    label_origin: LabelOrigin = LabelOrigin.FILTER_LIST
    ast_ids: set[str] = field(default_factory=set)


@dataclass
class AstStats:
    ast_id: str
    safe_count: int = 0
    track_count: int = 0
    classification: Classification = Classification.UNKNOWN
    # tracking carriers that came from the filter list rather than from
    # propagation; only used when config.count_propagated is off
    seed_track_count: int = 0


@dataclass(frozen=True)
class ClassifierConfig:
    tracking_fraction_threshold: float = 0.90
    min_url_support: int = 10
    count_propagated: bool = True
    block_boundary: str = "negative"  # "negative": block <0; "nonpositive": block <=0

    def __post_init__(self):
        if not 0.5 < self.tracking_fraction_threshold <= 1.0:
            raise ValueError("threshold must be in (0.5, 1.0]")
        if self.min_url_support < 2:
            raise ValueError("min_url_support must be >= 2")
        if self.block_boundary not in ("negative", "nonpositive"):
            raise ValueError("block_boundary must be 'negative' or 'nonpositive'")

    def to_dict(self) -> dict:
        return {
            "tracking_fraction_threshold": self.tracking_fraction_threshold,
            "min_url_support": self.min_url_support,
            "count_propagated": self.count_propagated,
            "block_boundary": self.block_boundary,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ClassifierConfig":
        return cls(**data)


@dataclass
class GraphDelta:
    """What one insertion changed beyond its own counts."""

    url_id: str
    new_tracking_asts: list[str] = field(default_factory=list)
    relabeled_urls: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class ClassificationReport:
    tracking_asts: tuple[tuple[str, int, int], ...]  # (ast_id, safe, track)
    new_tracking_urls: tuple[tuple[str, str], ...]  # (url_id, origin)
    iterations: int

    def to_jsonl(self) -> str:
        lines = []
        for ast_id, safe, track in self.tracking_asts:
            lines.append(json.dumps(
                {"ast_id": ast_id, "safe_count": safe, "track_count": track}))
        for url_id, origin in self.new_tracking_urls:
            lines.append(json.dumps({"url_id": url_id, "origin": origin}))
        lines.append(json.dumps({
            "iterations": self.iterations,
            "tracking_asts": len(self.tracking_asts),
            "new_tracking_urls": len(self.new_tracking_urls),
        }))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "ClassificationReport":
        tracking: list[tuple[str, int, int]] = []
        new_urls: list[tuple[str, str]] = []
        iterations = 0
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            if "ast_id" in obj:
                tracking.append((obj["ast_id"], obj["safe_count"], obj["track_count"]))
            elif "url_id" in obj:
                new_urls.append((obj["url_id"], obj["origin"]))
            elif "iterations" in obj:
                iterations = obj["iterations"]
        return cls(tuple(tracking), tuple(new_urls), iterations)


class GraphState:
    def __init__(self, config: ClassifierConfig | None = None):
        self.urls: dict[str, UrlRecord] = {}
        self.asts: dict[str, AstStats] = {}
        self.config = config or ClassifierConfig()
        self.insertion_log: list[str] = []
        self._ast_urls: dict[str, set[str]] = {}

    # -- queries ---------------------------------------------------------

    def safety(self, ast_id: str) -> int:
        stats = self.asts.get(ast_id)
        if stats is None:
            raise NotFound(f"unknown AST {ast_id!r}")
        return stats.safe_count - stats.track_count

    def blocking_decision(self, url_id: str, ast_id: str) -> Decision:
        url = self.urls.get(url_id)
        if url is None:
            raise NotFound(f"unknown URL {url_id!r}")
        if ast_id not in self.asts:
            raise NotFound(f"unknown AST {ast_id!r}")
        if ast_id not in url.ast_ids:
            raise InvalidQuery(f"AST {ast_id!r} not contained in URL {url_id!r}")
        stats = self.asts[ast_id]
        if stats.classification is Classification.TRACKING:
            return Decision.BLOCK
        safety = stats.safe_count - stats.track_count
        if self.config.block_boundary == "nonpositive":
            return Decision.BLOCK if safety <= 0 else Decision.ALLOW
        return Decision.BLOCK if safety < 0 else Decision.ALLOW

    # -- construction ------------------------------------------------------

    def add_url(self, record: UrlRecord, propagate: bool = True) -> GraphDelta:
        """Insert one URL; with `propagate` (dynamic mode) any AST pushed over
        the classification rule cascades immediately."""
        if record.url_id in self.urls:
            raise DuplicateInsert(f"URL {record.url_id!r} already inserted")
        record = replace(record, ast_ids=set(record.ast_ids))
        self.urls[record.url_id] = record
        self.insertion_log.append(record.url_id)
        for ast_id in record.ast_ids:
            stats = self.asts.get(ast_id)
            if stats is None:
                stats = self.asts[ast_id] = AstStats(ast_id)
                self._ast_urls[ast_id] = set()
            self._ast_urls[ast_id].add(record.url_id)
            if record.label is Label.SAFE:
                stats.safe_count += 1
            else:
                stats.track_count += 1
                if record.label_origin is LabelOrigin.FILTER_LIST:
                    stats.seed_track_count += 1
        delta = GraphDelta(url_id=record.url_id)
        if propagate:
            # carrying an already-classified AST relabels this URL right away
            already = [
                a for a in sorted(record.ast_ids)
                if self.asts[a].classification is Classification.TRACKING
            ]
            newly = [a for a in sorted(record.ast_ids) if self._rule_fires(a)]
            for ast_id in newly:
                self.asts[ast_id].classification = Classification.TRACKING
            delta.new_tracking_asts.extend(newly)
            self._propagate(already + newly, delta)
        return delta

    ingest_url = add_url

    def _rule_fires(self, ast_id: str) -> bool:
        stats = self.asts[ast_id]
        if stats.classification is Classification.TRACKING:
            return False
        cfg = self.config
        if cfg.count_propagated:
            track = stats.track_count
            total = stats.safe_count + stats.track_count
        else:
            track = stats.seed_track_count
            total = stats.safe_count + stats.seed_track_count
        if total < cfg.min_url_support:
            return False
        return track / total >= cfg.tracking_fraction_threshold

    def _propagate(self, newly_tracking: list[str], delta: GraphDelta) -> None:
        queue = list(newly_tracking)
        while queue:
            ast_id = queue.pop(0)
            for url_id in sorted(self._ast_urls[ast_id]):
                url = self.urls[url_id]
                if url.label is not Label.SAFE:
                    continue
                url.label = Label.TRACKING
                url.label_origin = LabelOrigin.PROPAGATED
                delta.relabeled_urls.append(url_id)
                for aid in url.ast_ids:
                    stats = self.asts[aid]
                    stats.safe_count -= 1
                    stats.track_count += 1
                for aid in sorted(url.ast_ids):
                    if self._rule_fires(aid):
                        self.asts[aid].classification = Classification.TRACKING
                        delta.new_tracking_asts.append(aid)
                        queue.append(aid)

    # -- batch classification ------------------------------------------------

    def classify_fixpoint(self) -> ClassificationReport:
        """Alternate rule application and relabeling until nothing changes.

        Both steps are monotone (UNKNOWN→TRACKING, SAFE→TRACKING only), so
        the loop terminates in at most |URLs| + |ASTs| rounds and the final
        state does not depend on iteration order.
        """
        iterations = 0
        while True:
            newly = [a for a in sorted(self.asts) if self._rule_fires(a)]
            if not newly:
                break
            iterations += 1
            for ast_id in newly:
                self.asts[ast_id].classification = Classification.TRACKING
            relabel = {
                url_id
                for ast_id in newly
                for url_id in self._ast_urls[ast_id]
                if self.urls[url_id].label is Label.SAFE
            }
            for url_id in sorted(relabel):
                url = self.urls[url_id]
                url.label = Label.TRACKING
                url.label_origin = LabelOrigin.PROPAGATED
                for aid in url.ast_ids:
                    stats = self.asts[aid]
                    stats.safe_count -= 1
                    stats.track_count += 1
        return self.report(iterations)

    def report(self, iterations: int = 0) -> ClassificationReport:
        tracking = tuple(
            (aid, st.safe_count, st.track_count)
            for aid, st in sorted(self.asts.items())
            if st.classification is Classification.TRACKING
        )
        new_urls = tuple(
            (uid, url.label_origin.value)
            for uid, url in sorted(self.urls.items())
            if url.label is Label.TRACKING and url.label_origin is LabelOrigin.PROPAGATED
        )
        return ClassificationReport(tracking, new_urls, iterations)

    def tracking_ast_ids(self) -> set[str]:
        return {
            aid for aid, st in self.asts.items()
            if st.classification is Classification.TRACKING
        }

    # -- equality (snapshot round-trips) ----------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, GraphState):
            return NotImplemented
        return (
            self.config == other.config
            and self.urls == other.urls
            and self.asts == other.asts
            and self.insertion_log == other.insertion_log
        )


def snapshot(state: GraphState) -> bytes:
    header = json.dumps({"version": SNAPSHOT_VERSION, "config": state.config.to_dict()})
    lines = [header, "#urls"]
    for url_id in sorted(state.urls):
        u = state.urls[url_id]
        lines.append(json.dumps({
            "url_id": u.url_id, "domain": u.domain, "rank": u.rank,
            "label": u.label.value, "label_origin": u.label_origin.value,
            "ast_ids": sorted(u.ast_ids),
        }))
    lines.append("#asts")
    for ast_id in sorted(state.asts):
        a = state.asts[ast_id]
        lines.append(json.dumps({
            "ast_id": a.ast_id, "safe_count": a.safe_count,
            "track_count": a.track_count,
            "seed_track_count": a.seed_track_count,
            "classification": a.classification.value,
        }))
    lines.append("#log")
    lines.append(json.dumps({"insertion_log": state.insertion_log}))
    return ("\n".join(lines) + "\n").encode("utf-8")


def restore(data: bytes) -> GraphState:
    try:
        lines = data.decode("utf-8").splitlines()
        if not lines:
            raise SnapshotError("empty snapshot")
        header = json.loads(lines[0])
        if header.get("version") != SNAPSHOT_VERSION:
            raise SnapshotError(f"unsupported snapshot version {header.get('version')!r}")
        state = GraphState(ClassifierConfig.from_dict(header["config"]))
        section = None
        for line in lines[1:]:
            if line in ("#urls", "#asts", "#log"):
                section = line
                continue
            if not line.strip():
                continue
            obj = json.loads(line)
            if section == "#urls":
                record = UrlRecord(
                    url_id=obj["url_id"], domain=obj["domain"], rank=obj["rank"],
                    label=Label(obj["label"]),
                    label_origin=LabelOrigin(obj["label_origin"]),
                    ast_ids=set(obj["ast_ids"]),
                )
                state.urls[record.url_id] = record
                for aid in record.ast_ids:
                    state._ast_urls.setdefault(aid, set()).add(record.url_id)
            elif section == "#asts":
                state.asts[obj["ast_id"]] = AstStats(
                    ast_id=obj["ast_id"],
                    safe_count=obj["safe_count"],
                    track_count=obj["track_count"],
                    classification=Classification(obj["classification"]),
                    seed_track_count=obj["seed_track_count"],
                )
            elif section == "#log":
                state.insertion_log = list(obj["insertion_log"])
            else:
                raise SnapshotError("content before any section marker")
    except SnapshotError:
        raise
    except Exception as exc:
        raise SnapshotError(f"corrupt snapshot: {exc}") from exc
    _verify_consistency(state)
    return state


def _verify_consistency(state: GraphState) -> None:
    safe: dict[str, int] = {}
    track: dict[str, int] = {}
    for url in state.urls.values():
        bucket = safe if url.label is Label.SAFE else track
        for aid in url.ast_ids:
            bucket[aid] = bucket.get(aid, 0) + 1
            if aid not in state.asts:
                raise SnapshotError(f"URL references unknown AST {aid!r}")
    for aid, stats in state.asts.items():
        if stats.safe_count != safe.get(aid, 0) or stats.track_count != track.get(aid, 0):
            raise SnapshotError(f"count mismatch for AST {aid!r}")
