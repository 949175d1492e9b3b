"""Suffix-array plumbing: construction, LCP, range minima, substring order.

Internal helpers shared by the parser and the tree builders.  Everything
here is offline (build-time) machinery; query-time code never touches it.
"""

from __future__ import annotations

import numpy as np


def suffix_array(text: str) -> np.ndarray:
    """Suffix array by prefix doubling (lexsort), O(n log^2 n)."""
    n = len(text)
    if n == 0:
        return np.empty(0, dtype=np.int64)
    if n == 1:
        return np.zeros(1, dtype=np.int64)
    # initial ranks from character codes
    codes = np.frombuffer(text.encode("utf-32-le"), dtype="<u4")
    order = np.argsort(codes, kind="stable")
    rank = np.empty(n, dtype=np.int64)
    rank[order] = np.cumsum(np.concatenate(([0], np.diff(codes[order]) != 0)))
    k = 1
    while k < n:
        key2 = np.full(n, -1, dtype=np.int64)
        key2[: n - k] = rank[k:]
        order = np.lexsort((key2, rank))
        changed = np.ones(n, dtype=np.int64)
        changed[0] = 0
        changed[1:] = (rank[order[1:]] != rank[order[:-1]]) | (
            key2[order[1:]] != key2[order[:-1]]
        )
        new_rank = np.empty(n, dtype=np.int64)
        new_rank[order] = np.cumsum(changed)
        rank = new_rank
        if rank[order[-1]] == n - 1:
            break
        k *= 2
    sa = np.empty(n, dtype=np.int64)
    sa[rank] = np.arange(n)
    return sa


def lcp_array(text: str, sa: np.ndarray) -> np.ndarray:
    """Kasai LCP: lcp[i] = LCP(text[sa[i-1]:], text[sa[i]:]), lcp[0] = 0."""
    n = len(text)
    lcp = np.zeros(n, dtype=np.int64)
    if n == 0:
        return lcp
    rank = np.empty(n, dtype=np.int64)
    rank[sa] = np.arange(n)
    h = 0
    for i in range(n):
        r = rank[i]
        if r == 0:
            h = 0
            continue
        j = sa[r - 1]
        while i + h < n and j + h < n and text[i + h] == text[j + h]:
            h += 1
        lcp[r] = h
        if h > 0:
            h -= 1
    return lcp


class RangeMin:
    """Sparse-table range minimum over an int array; query is O(1)."""

    def __init__(self, values: np.ndarray):
        self.n = len(values)
        if self.n == 0:
            self.table = np.empty((1, 0), dtype=np.int64)
            return
        levels = max(1, int(self.n).bit_length())
        table = np.empty((levels, self.n), dtype=np.int64)
        table[0] = values
        for k in range(1, levels):
            span = 1 << k
            half = span >> 1
            m = self.n - span + 1
            if m <= 0:
                table = table[:k]
                break
            table[k, :m] = np.minimum(table[k - 1, :m], table[k - 1, half : half + m])
        self.table = table

    def query(self, lo: int, hi: int) -> int:
        """Minimum of values[lo..hi] inclusive; lo <= hi required."""
        lo, hi = int(lo), int(hi)
        k = (hi - lo + 1).bit_length() - 1
        row = self.table[k]
        return int(min(row[lo], row[hi - (1 << k) + 1]))


class SuffixOrder:
    """Bundled SA/rank/LCP/RMQ for one text, with substring comparisons."""

    def __init__(self, text: str):
        self.text = text
        self.n = len(text)
        self.sa = suffix_array(text)
        self.rank = np.empty(self.n, dtype=np.int64)
        self.rank[self.sa] = np.arange(self.n)
        self.lcp = lcp_array(text, self.sa)
        self.rmq = RangeMin(self.lcp)

    def lcp_suffixes(self, i: int, j: int) -> int:
        """LCP of the suffixes starting at 0-based i and j."""
        if i == j:
            return self.n - i
        ri, rj = int(self.rank[i]), int(self.rank[j])
        if ri > rj:
            ri, rj = rj, ri
        return self.rmq.query(ri + 1, rj)

    def lcp_prefixes(self, i: int, li: int, j: int, lj: int) -> int:
        """LCP of text[i:i+li] and text[j:j+lj]."""
        return min(self.lcp_suffixes(i, j), li, lj)

    def compare_prefixes(self, i: int, li: int, j: int, lj: int) -> int:
        """Three-way lexicographic comparison of text[i:i+li] vs text[j:j+lj]."""
        l = self.lcp_prefixes(i, li, j, lj)
        if l == li and l == lj:
            return 0
        if l == li:
            return -1
        if l == lj:
            return 1
        return -1 if self.text[i + l] < self.text[j + l] else 1


def longest_previous_factor(text: str, order: SuffixOrder | None = None) -> np.ndarray:
    """LPF[i] = longest prefix of text[i:] occurring at some start j < i.

    Self-overlap allowed.  Computed from SA neighbours with smaller text
    position (previous/next smaller value over ranks) plus RMQ on LCP.
    """
    n = len(text)
    lpf = np.zeros(n, dtype=np.int64)
    if n == 0:
        return lpf
    so = order if order is not None else SuffixOrder(text)
    sa = so.sa
    # psv[r] / nsv[r]: nearest rank on the left/right with smaller sa value
    psv = np.full(n, -1, dtype=np.int64)
    nsv = np.full(n, -1, dtype=np.int64)
    stack: list[int] = []
    for r in range(n):
        while stack and sa[stack[-1]] > sa[r]:
            stack.pop()
        psv[r] = stack[-1] if stack else -1
        stack.append(r)
    stack.clear()
    for r in range(n - 1, -1, -1):
        while stack and sa[stack[-1]] > sa[r]:
            stack.pop()
        nsv[r] = stack[-1] if stack else -1
        stack.append(r)
    for r in range(n):
        pos = int(sa[r])
        best = 0
        if psv[r] >= 0:
            best = so.rmq.query(psv[r] + 1, r)
        if nsv[r] >= 0:
            best = max(best, so.rmq.query(r + 1, nsv[r]))
        lpf[pos] = best
    return lpf
