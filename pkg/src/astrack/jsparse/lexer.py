"""ECMAScript tokenizer.

Pull-based: the parser asks for one token at a time and can re-scan a `/`
as a regular expression literal or resume inside a template literal, which
is how the usual context ambiguities are resolved without heuristics.
"""

from __future__ import annotations

from dataclasses import dataclass


class ParseError(SyntaxError):
    """Source text rejected, with the byte/char offset where it happened."""

    def __init__(self, message: str, source: str, position: int):
        line = source.count("\n", 0, position) + 1
        col = position - (source.rfind("\n", 0, position) + 1)
        super().__init__(f"{message} (line {line}, column {col})")
        self.position = position
        self.line = line
        self.column = col


KEYWORDS = frozenset(
    """break case catch class const continue debugger default delete do else
    enum export extends false finally for function if import in instanceof
    new null return super switch this throw true try typeof var void while
    with""".split()
)

# Words that are only reserved in some contexts; the parser decides.
CONTEXTUAL = frozenset("async await get let of set static yield from as".split())

PUNCTUATORS = [
    ">>>=",
    "...", "===", "!==", "**=", "<<=", ">>=", "&&=", "||=", "??=", ">>>",
    "=>", "==", "!=", "<=", ">=", "&&", "||", "??", "?.", "++", "--",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "**",
    "{", "}", "(", ")", "[", "]", ";", ",", "<", ">", "+", "-", "*", "/",
    "%", "&", "|", "^", "!", "~", "?", ":", "=", ".", "@", "#", "`",
]

LINE_TERMINATORS = "\n\r\u2028\u2029"

_ESCAPE_MAP = {
    "n": "\n", "r": "\r", "t": "\t", "b": "\b",
    "f": "\f", "v": "\v", "0": "\0",
}


def _is_id_start(ch: str) -> bool:
    return ch == "$" or ch == "_" or ch.isalpha() or (ord(ch) > 127 and ch.isidentifier())


def _is_id_part(ch: str) -> bool:
    if ch == "$" or ch == "_" or ch.isalnum():
        return True
    if ch in "\u200c\u200d":
        return True
    return ord(ch) > 127 and ("a" + ch).isidentifier()


@dataclass(frozen=True)
class Token:
    kind: str  # ident | num | str | punct | regex | eof
    value: object
    start: int
    end: int
    nl: bool  # a line terminator appeared before this token
    escaped: bool = False  # identifier written with \u escapes (never a keyword)

    @property
    def keyword(self) -> bool:
        return self.kind == "ident" and not self.escaped and self.value in KEYWORDS


@dataclass(frozen=True)
class TemplatePart:
    raw: str
    cooked: str | None  # None when the raw text has an invalid escape
    tail: bool  # ended with ` rather than ${
    start: int  # offset of the first raw char
    end: int  # offset just past the closing ` or ${


class Lexer:
    def __init__(self, source: str):
        self.source = source
        self.length = len(source)
        self.pos = 0

    def _error(self, message: str, position: int | None = None) -> ParseError:
        return ParseError(message, self.source, self.pos if position is None else position)

    def _skip_trivia(self) -> bool:
        """Advance past whitespace and comments; report if a newline was crossed."""
        src, n = self.source, self.length
        saw_nl = False
        if self.pos == 0 and src.startswith("#!"):
            # hashbang comment, only legal at the very start
            while self.pos < n and src[self.pos] not in LINE_TERMINATORS:
                self.pos += 1
        while self.pos < n:
            ch = src[self.pos]
            if ch in LINE_TERMINATORS:
                saw_nl = True
                self.pos += 1
            elif ch.isspace() or ch == "\ufeff":
                self.pos += 1
            elif ch == "/" and self.pos + 1 < n and src[self.pos + 1] == "/":
                self.pos += 2
                while self.pos < n and src[self.pos] not in LINE_TERMINATORS:
                    self.pos += 1
            elif ch == "/" and self.pos + 1 < n and src[self.pos + 1] == "*":
                close = src.find("*/", self.pos + 2)
                if close < 0:
                    raise self._error("Unterminated block comment")
                if any(t in src[self.pos:close] for t in LINE_TERMINATORS):
                    saw_nl = True
                self.pos = close + 2
            elif src.startswith("<!--", self.pos):
                # Annex B HTML-open comment
                self.pos += 4
                while self.pos < n and src[self.pos] not in LINE_TERMINATORS:
                    self.pos += 1
            elif saw_nl and src.startswith("-->", self.pos):
                # Annex B HTML-close comment, only at the start of a line
                self.pos += 3
                while self.pos < n and src[self.pos] not in LINE_TERMINATORS:
                    self.pos += 1
            else:
                break
        return saw_nl

    def next_token(self) -> Token:
        nl = self._skip_trivia()
        start = self.pos
        if start >= self.length:
            return Token("eof", None, start, start, nl)
        ch = self.source[start]
        if _is_id_start(ch) or (ch == "\\" and self._peek_unicode_escape(start)):
            return self._read_identifier(nl)
        if ch.isdigit() or (ch == "." and start + 1 < self.length and self.source[start + 1].isdigit()):
            return self._read_number(nl)
        if ch in "'\"":
            return self._read_string(nl)
        return self._read_punct(nl)

    # -- identifiers ------------------------------------------------------

    def _peek_unicode_escape(self, at: int) -> bool:
        return self.source.startswith("\\u", at)

    def _read_escaped_id_char(self) -> str:
        # positioned at the backslash
        if not self.source.startswith("\\u", self.pos):
            raise self._error("Invalid identifier escape")
        self.pos += 2
        if self.pos < self.length and self.source[self.pos] == "{":
            close = self.source.find("}", self.pos)
            if close < 0:
                raise self._error("Unterminated unicode escape")
            code = self.source[self.pos + 1:close]
            self.pos = close + 1
        else:
            code = self.source[self.pos:self.pos + 4]
            self.pos += 4
        try:
            return chr(int(code, 16))
        except ValueError:
            raise self._error("Invalid unicode escape") from None

    def _read_identifier(self, nl: bool) -> Token:
        src, n = self.source, self.length
        start = self.pos
        chars: list[str] = []
        escaped = False
        while self.pos < n:
            ch = src[self.pos]
            if ch == "\\":
                escaped = True
                chars.append(self._read_escaped_id_char())
            elif (_is_id_part(ch) if chars else _is_id_start(ch)):
                chars.append(ch)
                self.pos += 1
            else:
                break
        if not chars:
            raise self._error("Unexpected character")
        return Token("ident", "".join(chars), start, self.pos, nl, escaped)

    # -- numbers ----------------------------------------------------------

    def _read_number(self, nl: bool) -> Token:
        src, n = self.source, self.length
        start = self.pos
        if src[start] == "0" and start + 1 < n and src[start + 1] in "xXoObB":
            digits = {
                "x": "0123456789abcdefABCDEF", "o": "01234567", "b": "01",
            }[src[start + 1].lower()]
            self.pos = start + 2
            while self.pos < n and (src[self.pos] in digits or src[self.pos] == "_"):
                self.pos += 1
            if self.pos == start + 2:
                raise self._error("Missing digits in numeric literal")
            if self.pos < n and src[self.pos] == "n":
                self.pos += 1
            raw = src[start:self.pos]
            base = {"x": 16, "o": 8, "b": 2}[raw[1].lower()]
            value: object = int(raw.rstrip("n")[2:].replace("_", ""), base)
        else:
            while self.pos < n and (src[self.pos].isdigit() or src[self.pos] == "_"):
                self.pos += 1
            if self.pos < n and src[self.pos] == ".":
                self.pos += 1
                while self.pos < n and (src[self.pos].isdigit() or src[self.pos] == "_"):
                    self.pos += 1
            if self.pos < n and src[self.pos] in "eE":
                mark = self.pos
                self.pos += 1
                if self.pos < n and src[self.pos] in "+-":
                    self.pos += 1
                if self.pos < n and src[self.pos].isdigit():
                    while self.pos < n and src[self.pos].isdigit():
                        self.pos += 1
                else:
                    self.pos = mark
            elif self.pos < n and src[self.pos] == "n":
                self.pos += 1
            raw = src[start:self.pos]
            plain = raw.replace("_", "")
            try:
                if plain.endswith("n"):
                    value = int(plain[:-1])
                elif plain.lstrip("0").isdigit() and plain.startswith("0") and len(plain) > 1 \
                        and "." not in plain and "e" not in plain and "E" not in plain \
                        and all(c in "01234567" for c in plain):
                    value = int(plain, 8)  # legacy octal
                else:
                    value = float(plain) if any(c in plain for c in ".eE") else int(plain)
            except ValueError:
                value = float("nan")
        return Token("num", value, start, self.pos, nl)

    # -- strings ----------------------------------------------------------

    def _read_string(self, nl: bool) -> Token:
        src, n = self.source, self.length
        start = self.pos
        quote = src[start]
        self.pos = start + 1
        out: list[str] = []
        while True:
            if self.pos >= n:
                raise self._error("Unterminated string literal", start)
            ch = src[self.pos]
            if ch == quote:
                self.pos += 1
                break
            if ch in LINE_TERMINATORS:
                raise self._error("Unterminated string literal", start)
            if ch == "\\":
                self.pos += 1
                out.append(self._read_string_escape())
            else:
                out.append(ch)
                self.pos += 1
        return Token("str", "".join(out), start, self.pos, nl)

    def _read_string_escape(self) -> str:
        src, n = self.source, self.length
        if self.pos >= n:
            raise self._error("Unterminated string literal")
        ch = src[self.pos]
        if ch in _ESCAPE_MAP:
            self.pos += 1
            return _ESCAPE_MAP[ch]
        if ch == "x":
            code = src[self.pos + 1:self.pos + 3]
            self.pos += 3
            try:
                return chr(int(code, 16))
            except ValueError:
                return "x" + code
        if ch == "u":
            self.pos += 1
            if self.pos < n and src[self.pos] == "{":
                close = src.find("}", self.pos)
                if close < 0:
                    raise self._error("Unterminated unicode escape")
                code = src[self.pos + 1:close]
                self.pos = close + 1
            else:
                code = src[self.pos:self.pos + 4]
                self.pos += 4
            try:
                return chr(int(code, 16))
            except ValueError:
                return "u" + code
        if ch in LINE_TERMINATORS:
            # line continuation; \r\n collapses
            if src.startswith("\r\n", self.pos):
                self.pos += 2
            else:
                self.pos += 1
            return ""
        self.pos += 1
        return ch

    # -- punctuators ------------------------------------------------------

    def _read_punct(self, nl: bool) -> Token:
        src = self.source
        start = self.pos
        for p in PUNCTUATORS:
            if src.startswith(p, start):
                if p == "?." and start + 2 < self.length and src[start + 2].isdigit():
                    # `a ?. 5 : b` is conditional-then-number, not optional chaining
                    p = "?"
                self.pos = start + len(p)
                return Token("punct", p, start, self.pos, nl)
        raise self._error(f"Unexpected character {src[start]!r}")

    # -- context-dependent rescans ---------------------------------------

    def scan_regex(self, start: int) -> Token:
        """Re-scan from `start` (at the leading /) as a regex literal."""
        src, n = self.source, self.length
        pos = start + 1
        in_class = False
        while True:
            if pos >= n:
                raise self._error("Unterminated regular expression", start)
            ch = src[pos]
            if ch == "\\":
                pos += 2
                continue
            if ch in LINE_TERMINATORS:
                raise self._error("Unterminated regular expression", start)
            if ch == "[":
                in_class = True
            elif ch == "]":
                in_class = False
            elif ch == "/" and not in_class:
                pos += 1
                break
            pos += 1
        body_end = pos - 1
        while pos < n and _is_id_part(src[pos]):
            pos += 1
        self.pos = pos
        return Token(
            "regex",
            {"pattern": src[start + 1:body_end], "flags": src[body_end + 1:pos]},
            start, pos, False,
        )

    def scan_template_part(self, start: int) -> TemplatePart:
        """Scan a template chunk beginning right after a backtick or `}`."""
        src, n = self.source, self.length
        pos = start
        cooked: list[str] | None = []
        while True:
            if pos >= n:
                raise self._error("Unterminated template literal", start)
            ch = src[pos]
            if ch == "`":
                return TemplatePart(src[start:pos], self._join(cooked), True, start, pos + 1)
            if ch == "$" and pos + 1 < n and src[pos + 1] == "{":
                return TemplatePart(src[start:pos], self._join(cooked), False, start, pos + 2)
            if ch == "\\":
                save = self.pos
                self.pos = pos + 1
                try:
                    piece = self._read_string_escape()
                    if cooked is not None:
                        cooked.append(piece)
                except ParseError:
                    cooked = None
                pos = self.pos
                self.pos = save
            else:
                if cooked is not None:
                    cooked.append(ch)
                pos += 1

    @staticmethod
    def _join(parts: list[str] | None) -> str | None:
        return None if parts is None else "".join(parts)


def _skip_template(lx: Lexer, after_backtick: int) -> int:
    """Return the offset just past the closing backtick."""
    pos = after_backtick
    while True:
        part = lx.scan_template_part(pos)
        if part.tail:
            return part.end
        lx.pos = part.end
        depth = 1
        while depth:
            t = lx.next_token()
            if t.kind == "eof":
                raise ParseError("Unterminated template literal", lx.source, after_backtick)
            if t.kind == "punct":
                if t.value == "{":
                    depth += 1
                elif t.value == "}":
                    depth -= 1
                elif t.value == "`":
                    lx.pos = _skip_template(lx, t.end)
        pos = t.end


def tokenize(source: str) -> list[Token]:
    """Debug/utility scan of the plain token stream.

    Regex internals are not resolved here (that needs parser context): `/`
    comes out as a punctuator. Template literals are folded into single
    opaque `template` tokens.
    """
    lx = Lexer(source)
    out: list[Token] = []
    while True:
        tok = lx.next_token()
        if tok.kind == "eof":
            out.append(tok)
            return out
        if tok.kind == "punct" and tok.value == "`":
            end = _skip_template(lx, tok.end)
            lx.pos = end
            out.append(Token("template", source[tok.start:end], tok.start, end, tok.nl))
            continue
        out.append(tok)
