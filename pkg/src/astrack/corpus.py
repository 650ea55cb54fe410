"""Corpus ingestion: labeled crawl snapshots, filter rules, keyword scans.

The toolkit never crawls; it consumes a snapshot manifest pointing at
resource bodies on disk. URL seed labels come from a manifest override or
from a deliberately small filter-rule subset (domain anchors ``||``,
separators ``^``, wildcards ``*``, plain substrings).
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from urllib.parse import urlsplit

from .graph import Label

log = logging.getLogger(__name__)


class ManifestError(ValueError):
    pass


@dataclass(frozen=True)
class CorpusEntry:
    domain: str
    rank: int
    url: str
    content_path: str
    content_type: str
    declared_label: str | None = None

    def to_dict(self) -> dict:
        record = {
            "domain": self.domain, "rank": self.rank, "url": self.url,
            "content_path": self.content_path, "content_type": self.content_type,
        }
        if self.declared_label is not None:
            record["declared_label"] = self.declared_label
        return record


@dataclass
class CorpusManifest:
    entries: list[CorpusEntry]
    base_dir: Path = field(default_factory=Path)

    def body(self, entry: CorpusEntry) -> str:
        return (self.base_dir / entry.content_path).read_text(
            encoding="utf-8", errors="replace")

    def by_url(self) -> dict[str, CorpusEntry]:
        return {e.url: e for e in self.entries}

    def serialize(self) -> str:
        return "".join(json.dumps(e.to_dict()) + "\n" for e in self.entries)


_REQUIRED_FIELDS = ("domain", "rank", "url", "content_path", "content_type")


def load_manifest(path, check_paths: bool = True) -> CorpusManifest:
    """Parse and validate a JSON-lines manifest; problems name their line."""
    path = Path(path)
    entries: list[CorpusEntry] = []
    seen_urls: dict[str, int] = {}
    problems: list[str] = []
    base_dir = path.parent
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                problems.append(f"line {lineno}: invalid JSON ({exc.msg})")
                continue
            missing = [f for f in _REQUIRED_FIELDS if f not in obj]
            if missing:
                problems.append(f"line {lineno}: missing fields {missing}")
                continue
            if not isinstance(obj["rank"], int) or obj["rank"] <= 0:
                problems.append(f"line {lineno}: rank must be a positive integer")
                continue
            url = obj["url"]
            if url in seen_urls:
                problems.append(
                    f"line {lineno}: duplicate url {url!r} (first at line {seen_urls[url]})")
                continue
            seen_urls[url] = lineno
            declared = obj.get("declared_label")
            if declared is not None and declared not in ("SAFE", "TRACKING"):
                problems.append(f"line {lineno}: declared_label must be SAFE or TRACKING")
                continue
            if check_paths and not (base_dir / obj["content_path"]).exists():
                problems.append(f"line {lineno}: content_path does not exist: "
                                f"{obj['content_path']}")
                continue
            entries.append(CorpusEntry(
                domain=obj["domain"], rank=obj["rank"], url=url,
                content_path=obj["content_path"], content_type=obj["content_type"],
                declared_label=declared,
            ))
    if problems:
        raise ManifestError("; ".join(problems))
    return CorpusManifest(entries=entries, base_dir=base_dir)


def save_manifest(manifest: CorpusManifest, path) -> None:
    Path(path).write_text(manifest.serialize(), encoding="utf-8")


# -- filter rules -----------------------------------------------------------

_UNSUPPORTED_MARKERS = ("##", "#@#", "#?#")


class FilterRuleSet:
    """Compiled subset of Adblock-style patterns.

    Unsupported syntax (element hiding, `$option` suffixes, `@@` exceptions,
    single-pipe anchors) is skipped and counted, not an error. Matching is
    case-insensitive like the stock matchers.
    """

    def __init__(self, rules: list[str]):
        self.rules: list[str] = []
        self.skipped = 0
        self._compiled: list[re.Pattern] = []
        for rule in rules:
            rule = rule.strip()
            if not rule or rule.startswith("!"):
                continue
            if self._unsupported(rule):
                self.skipped += 1
                continue
            self.rules.append(rule)
            self._compiled.append(self._compile(rule))
        if self.skipped:
            log.warning("filter rules: skipped %d unsupported pattern(s)", self.skipped)

    @staticmethod
    def _unsupported(rule: str) -> bool:
        if any(marker in rule for marker in _UNSUPPORTED_MARKERS):
            return True
        if rule.startswith("@@"):
            return True
        if "$" in rule:
            return True
        body = rule[2:] if rule.startswith("||") else rule
        return "|" in body

    @staticmethod
    def _compile(rule: str) -> re.Pattern:
        parts: list[str] = []
        rest = rule
        if rule.startswith("||"):
            parts.append(r"^[a-z][a-z0-9+.\-]*://(?:[^/?#]*\.)?")
            rest = rule[2:]
        for ch in rest:
            if ch == "*":
                parts.append(".*")
            elif ch == "^":
                parts.append(r"(?:[^a-zA-Z0-9_\-.%]|$)")
            else:
                parts.append(re.escape(ch))
        return re.compile("".join(parts), re.IGNORECASE)

    def matches(self, url: str) -> bool:
        return any(rx.search(url) for rx in self._compiled)

    @classmethod
    def load(cls, path) -> "FilterRuleSet":
        return cls(Path(path).read_text(encoding="utf-8").splitlines())


def label_url(url: str, rules: FilterRuleSet) -> Label:
    """TRACKING iff some rule matches; malformed URLs stay SAFE (warned)."""
    try:
        parts = urlsplit(url)
        if not parts.scheme or not parts.netloc:
            raise ValueError("not an absolute URL")
    except ValueError:
        log.warning("unparseable URL treated as SAFE: %r", url)
        return Label.SAFE
    return Label.TRACKING if rules.matches(url) else Label.SAFE


def resolve_label(entry: CorpusEntry, rules: FilterRuleSet) -> Label:
    """Manifest override wins over the matcher (replays pre-labeled crawls)."""
    if entry.declared_label is not None:
        return Label(entry.declared_label)
    return label_url(entry.url, rules)


# -- keyword scan -------------------------------------------------------------

# Storage-access names plus common fingerprinting surface calls; a stand-in
# default, fully overridable from a keywords file.
DEFAULT_KEYWORDS = (
    "getCookie", "setCookie", "localStorage", "sessionStorage",
    "document.cookie", "indexedDB",
    "toDataURL", "getImageData", "measureText", "getSupportedExtensions",
    "WEBGL_debug_renderer_info", "readPixels",
    "AudioContext", "OscillatorNode", "createAnalyser", "getFloatFrequencyData",
    "enumerateDevices", "getTimezoneOffset", "deviceMemory",
    "hardwareConcurrency", "maxTouchPoints", "getBattery", "doNotTrack",
)


@dataclass(frozen=True)
class KeywordList:
    keywords: frozenset[str]
    provenance: str = ""
    case_sensitive: bool = True

    def __post_init__(self):
        if not self.keywords:
            raise ValueError("keyword list must be non-empty")

    @classmethod
    def default(cls) -> "KeywordList":
        return cls(frozenset(DEFAULT_KEYWORDS),
                   provenance="built-in storage + fingerprinting API names")

    @classmethod
    def load(cls, path) -> "KeywordList":
        words = [
            w.strip() for w in Path(path).read_text(encoding="utf-8").splitlines()
            if w.strip() and not w.startswith("#")
        ]
        return cls(frozenset(words), provenance=str(path))


@dataclass(frozen=True)
class KeywordScan:
    matched: frozenset[str]
    counts: dict[str, int]


def keyword_scan(source: str, keywords: KeywordList) -> KeywordScan:
    """Substring occurrence counts for each keyword."""
    haystack = source if keywords.case_sensitive else source.lower()
    counts: dict[str, int] = {}
    for word in sorted(keywords.keywords):
        needle = word if keywords.case_sensitive else word.lower()
        n = haystack.count(needle)
        if n:
            counts[word] = n
    return KeywordScan(matched=frozenset(counts), counts=counts)
