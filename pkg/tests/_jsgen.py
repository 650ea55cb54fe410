"""Seeded random JavaScript source generator for fixture corpora.

Generates syntactically valid programs with enough construct variety
(functions, arrows, classes, loops, objects, templates) to exercise the
fingerprinting pipeline. Determinism: same seed, same source.
"""

from __future__ import annotations

import random

_RESERVED = {
    "do", "if", "in", "for", "let", "new", "try", "var", "case", "else",
    "enum", "null", "this", "true", "void", "with", "async", "await",
    "break", "catch", "class", "const", "false", "super", "throw", "while",
    "yield", "delete", "export", "import", "public", "return", "static",
    "switch", "typeof", "default", "extends", "finally", "continue",
    "debugger", "function", "arguments", "instanceof", "of", "get", "set",
}


class JsGen:
    def __init__(self, seed: int):
        self.rng = random.Random(seed)
        self._counter = 0

    def name(self) -> str:
        self._counter += 1
        base = self.rng.choice(
            ["item", "node", "value", "cache", "count", "state", "entry",
             "flag", "buf", "the", "tmp", "acc"])
        candidate = f"{base}{self._counter}"
        while candidate in _RESERVED:
            candidate += "x"
        return candidate

    def string(self) -> str:
        length = self.rng.randint(0, 10)
        body = "".join(self.rng.choice("abcdefgh retina0123_") for _ in range(length))
        return f"'{body}'"

    def number(self) -> str:
        return str(self.rng.randint(0, 99999))

    def literal(self) -> str:
        return self.rng.choice([self.string, self.number,
                                lambda: "true", lambda: "false",
                                lambda: "null"])()

    def expr(self, depth: int) -> str:
        if depth <= 0:
            return self.rng.choice([self.literal, self.name])()
        pick = self.rng.randrange(12)
        if pick == 0:
            op = self.rng.choice(["+", "-", "*", "%", "&&", "||", "===", "<", ">="])
            return f"{self.expr(depth - 1)} {op} {self.expr(depth - 1)}"
        if pick == 1:
            return f"{self.name()}({', '.join(self.expr(depth - 1) for _ in range(self.rng.randint(0, 3)))})"
        if pick == 2:
            return f"{self.name()}.{self.name()}"
        if pick == 3:
            return f"{self.name()}[{self.expr(depth - 1)}]"
        if pick == 4:
            items = ", ".join(self.expr(depth - 1) for _ in range(self.rng.randint(0, 4)))
            return f"[{items}]"
        if pick == 5:
            props = ", ".join(
                f"{self.name()}: {self.expr(depth - 1)}"
                for _ in range(self.rng.randint(0, 3)))
            return f"({{{props}}})"
        if pick == 6:
            params = ", ".join(self.name() for _ in range(self.rng.randint(0, 2)))
            return f"(({params}) => {self.expr(depth - 1)})"
        if pick == 7:
            return f"({self.expr(depth - 1)} ? {self.expr(depth - 1)} : {self.expr(depth - 1)})"
        if pick == 8:
            return f"`prefix ${{{self.expr(depth - 1)}}} suffix`"
        if pick == 9:
            return f"(function({self.name()}) {{ return {self.expr(depth - 1)}; }})"
        if pick == 10:
            op = self.rng.choice(["!", "-", "typeof ", "void "])
            return f"{op}{self.expr(depth - 1)}"
        return f"new {self.name().title()}({self.expr(depth - 1)})"

    def statement(self, depth: int, in_function: bool) -> str:
        pick = self.rng.randrange(10)
        if pick in (0, 1):
            kind = self.rng.choice(["var", "let", "const"])
            return f"{kind} {self.name()} = {self.expr(depth)};"
        if pick == 2:
            return (f"if ({self.expr(depth - 1)}) {{ "
                    f"{self.statement(depth - 1, in_function)} }} else {{ "
                    f"{self.statement(depth - 1, in_function)} }}")
        if pick == 3:
            i = self.name()
            return (f"for (var {i} = 0; {i} < {self.rng.randint(2, 9)}; {i}++) {{ "
                    f"{self.statement(depth - 1, in_function)} }}")
        if pick == 4:
            return (f"while ({self.expr(depth - 1)}) {{ "
                    f"{self.name()}({self.expr(depth - 1)}); break; }}")
        if pick == 5 and in_function:
            return f"return {self.expr(depth)};"
        if pick == 6:
            return (f"try {{ {self.statement(depth - 1, in_function)} }} "
                    f"catch ({self.name()}) {{ {self.name()}(); }}")
        if pick == 7 and depth > 0:
            return self.function(depth - 1)
        if pick == 8 and depth > 0:
            cls, method = self.name().title(), self.name()
            return (f"class {cls} {{ constructor() {{ this.{self.name()} = "
                    f"{self.literal()}; }} {method}() {{ return "
                    f"{self.expr(depth - 1)}; }} }}")
        return f"{self.name()}({self.expr(depth)});"

    def function(self, depth: int) -> str:
        params = ", ".join(self.name() for _ in range(self.rng.randint(0, 3)))
        body = " ".join(
            self.statement(depth, True) for _ in range(self.rng.randint(1, 4)))
        tail = f"return {self.expr(depth)};"
        return f"function {self.name()}({params}) {{ {body} {tail} }}"

    def program(self, statements: int = 8, depth: int = 3) -> str:
        parts = [self.statement(depth, False) for _ in range(statements)]
        return "\n".join(parts) + "\n"


def corpus(n: int, seed: int = 20260809) -> list[str]:
    """n deterministic programs of varying size and shape."""
    out = []
    for i in range(n):
        gen = JsGen(seed + i)
        out.append(gen.program(statements=3 + (i % 8), depth=2 + (i % 3)))
    return out
