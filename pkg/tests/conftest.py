"""Shared test helpers: independent reference implementations."""

from __future__ import annotations

import pytest


def reference_lz_parse(text: str) -> tuple[int, ...]:
    """Quadratic greedy parse: longest factor at an earlier start."""
    n = len(text)
    bounds = []
    i = 0
    while i < n:
        best = 0
        for j in range(i):
            length = 0
            while i + length < n and text[j + length] == text[i + length]:
                length += 1
            best = max(best, length)
        i += best if best else 1
        bounds.append(i)
    return tuple(bounds)


def reference_validate_attractor(text: str, positions) -> bool:
    """Triple-loop attractor check over every substring."""
    n = len(text)
    pos = set(int(p) - 1 for p in positions)  # 0-based
    for i in range(n):
        for j in range(i, n):
            sub = text[i : j + 1]
            ok = False
            start = text.find(sub)
            while start != -1:
                if any(start <= p <= start + len(sub) - 1 for p in pos):
                    ok = True
                    break
                start = text.find(sub, start + 1)
            if not ok:
                return False
    return True


def distinct_substring_counts(text: str) -> list[int]:
    """d_k for k = 1..n via hash sets."""
    n = len(text)
    return [len({text[i : i + k] for i in range(n - k + 1)}) for k in range(1, n + 1)]


def naive_patricia(strings: list[str]):
    """Compressed trie of a set of strings, as comparable shape data.

    Returns (leaf labels in lexicographic order, set of internal-node
    path labels).  Internal nodes are branching prefixes: prefixes at
    which at least two members diverge, or where a member ends while
    others continue.
    """
    strings = sorted(set(strings))
    internals = {""}  # the root
    for a, b in zip(strings, strings[1:]):
        lcp = 0
        while lcp < min(len(a), len(b)) and a[lcp] == b[lcp]:
            lcp += 1
        internals.add(a[:lcp])
    # LCA-closure of pairwise-adjacent prefixes is automatic: the set of
    # adjacent LCPs already contains every branching prefix.
    return strings, internals


def longest_prefix_present(query: str, strings: list[str]) -> int:
    """Length of the longest prefix of `query` prefixing any member."""
    best = 0
    for s in strings:
        lcp = 0
        while lcp < min(len(query), len(s)) and query[lcp] == s[lcp]:
            lcp += 1
        best = max(best, lcp)
    return best


@pytest.fixture
def example_index():
    from amsi.index import build_index

    return build_index("aaabbbcc", [3, 6, 8])
