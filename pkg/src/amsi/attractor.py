"""Parsings of a text: LZ factorization, attractor checking, delta.

A parsing is a set of boundary positions cutting the text into phrases.
Phrases are half-open: phrase k covers text positions (b_{k-1}, b_k]
(1-based, b_0 = 0), so they concatenate back to the text exactly.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from amsi.suffixes import SuffixOrder, longest_previous_factor

VALIDATE_CAP = 4096


class SizeCapError(ValueError):
    """Input exceeds the cap of a quadratic checker."""


@dataclass(frozen=True)
class Parsing:
    """Phrase boundaries of a text: ascending 1-based end positions."""

    n: int
    boundaries: tuple[int, ...]

    def __post_init__(self):
        bs = self.boundaries
        if self.n == 0:
            if bs:
                raise ValueError("empty text admits no boundaries")
            return
        if not bs:
            raise ValueError("non-empty text needs at least one boundary")
        if bs[-1] != self.n:
            raise ValueError("last boundary must equal the text length")
        prev = 0
        for b in bs:
            if not prev < b <= self.n:
                raise ValueError(f"boundary {b} out of order or range")
            prev = b

    @property
    def B(self) -> int:
        return len(self.boundaries)

    def phrase_span(self, k: int) -> tuple[int, int]:
        """0-based half-open [start, end) of phrase k (0-based k)."""
        start = self.boundaries[k - 1] if k > 0 else 0
        return start, self.boundaries[k]

    def phrases(self, text: str) -> list[str]:
        return [text[s:e] for s, e in (self.phrase_span(k) for k in range(self.B))]


@dataclass(frozen=True)
class RepetitivenessStats:
    """Size measures of a text: LZ phrase count, attractor size used, delta."""

    z: int
    gamma_prime: int
    delta: Fraction


def lz_parse(text: str, order: SuffixOrder | None = None) -> Parsing:
    """Greedy self-referential LZ parse.

    Each phrase is the longest prefix of the remaining text that occurs at
    an earlier start position (overlap allowed), or a single fresh
    character.  The boundary set is a valid string attractor.
    """
    n = len(text)
    if n == 0:
        return Parsing(0, ())
    lpf = longest_previous_factor(text, order)
    bounds: list[int] = []
    i = 0
    while i < n:
        step = int(lpf[i]) if lpf[i] > 0 else 1
        i += step
        bounds.append(i)
    return Parsing(n, tuple(bounds))


def validate_attractor(text: str, positions) -> bool:
    """Check that every substring has an occurrence covering a position.

    Exhausts all distinct substrings grouped by their occurrence sets
    (suffix-array interval classes); within a class only the shortest
    length needs checking because coverage windows grow with length.
    Quadratic-flavoured; refuses inputs longer than VALIDATE_CAP.
    """
    n = len(text)
    if n > VALIDATE_CAP:
        raise SizeCapError(f"text length {n} exceeds cap {VALIDATE_CAP}")
    pos = sorted(int(p) for p in positions)
    if any(p < 1 or p > n for p in pos):
        raise ValueError("attractor positions must lie in [1, n]")
    if n == 0:
        return True
    if not pos:
        return False
    pos0 = [p - 1 for p in pos]  # 0-based attractor positions

    def covered(starts, length) -> bool:
        # some occurrence window [s, s+length-1] contains an attractor position
        for s in starts:
            j = bisect.bisect_left(pos0, s)
            if j < len(pos0) and pos0[j] <= s + length - 1:
                return True
        return False

    so = SuffixOrder(text)
    sa, lcp = so.sa, so.lcp
    # leaf classes: suffix sa[r] alone, minimal length = max(adjacent lcps) + 1
    for r in range(n):
        left = int(lcp[r]) if r > 0 else 0
        right = int(lcp[r + 1]) if r + 1 < n else 0
        min_len = max(left, right) + 1
        if min_len > n - int(sa[r]):
            continue  # suffix fully shared; class empty
        if not covered([int(sa[r])], min_len):
            return False
    # internal classes via the LCP-interval stack; parent depth + 1 is the
    # shortest length sharing this occurrence interval
    stack: list[tuple[int, int]] = [(0, 0)]  # (depth, left boundary)
    for i in range(1, n + 1):
        cur = int(lcp[i]) if i < n else 0
        lb = i - 1
        while stack and cur < stack[-1][0]:
            depth, lo = stack.pop()
            hi = i - 1
            parent_depth = max(stack[-1][0] if stack else 0, cur)
            if depth > parent_depth:
                starts = [int(sa[r]) for r in range(lo, hi + 1)]
                if not covered(starts, parent_depth + 1):
                    return False
            lb = lo
        if not stack or cur > stack[-1][0]:
            stack.append((cur, lb))
    return True


def compute_delta(text: str, order: SuffixOrder | None = None) -> Fraction:
    """Exact max over k of (#distinct k-substrings) / k as a rational."""
    n = len(text)
    if n == 0:
        return Fraction(0)
    so = order if order is not None else SuffixOrder(text)
    # count[k] = number of adjacent SA pairs with LCP >= k
    hist = np.bincount(so.lcp[1:], minlength=n + 2) if n > 1 else np.zeros(n + 2, dtype=np.int64)
    geq = np.cumsum(hist[::-1])[::-1]
    best = Fraction(0)
    for k in range(1, n + 1):
        d_k = (n - k + 1) - int(geq[k])
        cand = Fraction(d_k, k)
        if cand > best:
            best = cand
    return best


def boundaries_to_parsing(n: int, positions) -> Parsing:
    """Parsing from an attractor position set: boundaries = positions + {n}."""
    pos = sorted(int(p) for p in positions)
    for a, b in zip(pos, pos[1:]):
        if a == b:
            raise ValueError("attractor positions must be distinct")
    if pos and (pos[0] < 1 or pos[-1] > n):
        raise ValueError("attractor positions must lie in [1, n]")
    if n == 0:
        if pos:
            raise ValueError("empty text admits no positions")
        return Parsing(0, ())
    if not pos or pos[-1] != n:
        pos.append(n)
    return Parsing(n, tuple(pos))


def repetitiveness_stats(text: str, parsing: Parsing | None = None,
                         order: SuffixOrder | None = None) -> RepetitivenessStats:
    """z (LZ phrase count), gamma' (boundaries actually used), exact delta."""
    so = order if order is not None else SuffixOrder(text)
    z = lz_parse(text, so).B
    gamma_prime = parsing.B if parsing is not None else z
    return RepetitivenessStats(z=z, gamma_prime=gamma_prime, delta=compute_delta(text, so))
