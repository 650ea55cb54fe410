"""Pulling JavaScript out of HTML documents, leniently."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from html.parser import HTMLParser

# `type` attribute values that still execute as scripts; anything else
# (json, templates, import maps) is data.
_EXECUTABLE_TYPES = frozenset([
    "", "module", "text/javascript", "application/javascript",
    "application/x-javascript", "text/ecmascript", "application/ecmascript",
    "text/jscript",
])


class ScriptOrigin(Enum):
    INLINE = "inline"
    EXTERNAL_REF = "external-ref"


@dataclass(frozen=True)
class ExtractedScript:
    text: str  # script body for inline, the src reference for external
    origin: ScriptOrigin


class _ScriptCollector(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.scripts: list[ExtractedScript] = []
        self._collecting = False
        self._chunks: list[str] = []

    def handle_starttag(self, tag, attrs):
        if tag != "script":
            return
        attr_map = {k.lower(): (v or "") for k, v in attrs}
        declared = attr_map.get("type", "").strip().lower()
        src = attr_map.get("src")
        if src:
            if declared in _EXECUTABLE_TYPES:
                self.scripts.append(ExtractedScript(src, ScriptOrigin.EXTERNAL_REF))
            return
        if declared in _EXECUTABLE_TYPES:
            self._collecting = True
            self._chunks = []

    def handle_data(self, data):
        if self._collecting:
            self._chunks.append(data)

    def handle_endtag(self, tag):
        if tag == "script" and self._collecting:
            self._collecting = False
            body = "".join(self._chunks)
            if body.strip():
                self.scripts.append(ExtractedScript(body, ScriptOrigin.INLINE))
            self._chunks = []

    def close(self):
        super().close()
        if self._collecting:
            # unterminated trailing script: best effort
            self._collecting = False
            body = "".join(self._chunks)
            if body.strip():
                self.scripts.append(ExtractedScript(body, ScriptOrigin.INLINE))


def extract_scripts(html: str) -> list[ExtractedScript]:
    """All executable inline script bodies plus external src references.

    Malformed markup is tolerated; extraction is best effort and never
    raises on bad HTML.
    """
    collector = _ScriptCollector()
    try:
        collector.feed(html)
        collector.close()
    except Exception:
        pass  # keep whatever was collected before the parser gave up
    return collector.scripts
