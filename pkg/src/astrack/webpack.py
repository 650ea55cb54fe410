"""Recognizing bundler-packed files by their chain prefixes.

Bundle wrappers (webpackJsonp pushes and friends) vary in names and chunk
ids but keep an identical leading structure, so the label chains of packed
files share long prefixes. Learning those prefixes from known packed files
gives a cheap structural detector.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fingerprint import FileFingerprint

MIN_PATTERN_LENGTH = 8


@dataclass(frozen=True)
class PrefixPatternSet:
    patterns: frozenset[tuple[int, ...]]
    min_length: int

    def __post_init__(self):
        for p in self.patterns:
            if len(p) < self.min_length:
                raise ValueError("pattern shorter than min_length")
        ordered = sorted(self.patterns, key=len)
        for i, shorter in enumerate(ordered):
            for longer in ordered[i + 1:]:
                if longer[:len(shorter)] == shorter:
                    raise ValueError("one pattern is a prefix of another")


def _lcp(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    n = min(len(a), len(b))
    i = 0
    while i < n and a[i] == b[i]:
        i += 1
    return i


def learn_webpack_patterns(
    known_webpack_files: list[FileFingerprint],
    min_support: int,
    min_length: int = MIN_PATTERN_LENGTH,
) -> PrefixPatternSet:
    """Maximal root-chain prefixes shared by at least `min_support` inputs.

    Each training file contributes its longest prefix carried by a
    min_support-sized group; prefixes below `min_length` are dropped, and
    when one surviving prefix extends another only the shorter is kept
    (keeps the set prefix-free while still matching every contributor).
    """
    if len(known_webpack_files) < 2:
        raise ValueError("need at least two known packed files")
    if min_support < 2:
        raise ValueError("min_support must be at least 2")
    if min_length < MIN_PATTERN_LENGTH:
        raise ValueError(f"min_length must be >= {MIN_PATTERN_LENGTH}")
    chains = sorted(fp.root_chain for fp in known_webpack_files)
    n = len(chains)
    if min_support > n:
        return PrefixPatternSet(frozenset(), min_length)
    adjacent = [_lcp(chains[i], chains[i + 1]) for i in range(n - 1)]
    best: list[int] = [0] * n
    for lo in range(0, n - min_support + 1):
        hi = lo + min_support - 1  # window [lo, hi] inclusive
        shared = min(adjacent[lo:hi]) if hi > lo else len(chains[lo])
        for i in range(lo, hi + 1):
            if shared > best[i]:
                best[i] = shared
    candidates = {chains[i][:best[i]] for i in range(n) if best[i] >= min_length}
    kept: list[tuple[int, ...]] = []
    for p in sorted(candidates, key=len):
        if not any(p[:len(q)] == q for q in kept):
            kept.append(p)
    return PrefixPatternSet(frozenset(kept), min_length)


def is_webpack(file: FileFingerprint, patterns: PrefixPatternSet) -> bool:
    """True iff some learned prefix matches the start of the file's chain."""
    chain = file.root_chain
    return any(chain[:len(p)] == p for p in patterns.patterns)
