"""Matching statistics, solution 1: partner walks over every split.

For each prefix/suffix split of the pattern, walk from the phrase-tree
locus up to the root and pair every ancestor with its partner in the
suffix tree; each pairing contributes candidate match lengths.  A final
pass handles matches that end exactly at a phrase boundary at the very
end of the pattern (left part only), and the decrement closure
MS[i] >= MS[i-1] - 1 is applied.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from amsi.patricia import Locus

if TYPE_CHECKING:  # pragma: no cover
    from amsi.index import MSIndex


def _walk_nodes(locus: Locus):
    """Non-root nodes on the path locus -> root, bottom-up, with the
    effective label length of each (the locus node counts its matched
    prefix, not its full depth)."""
    node = locus.node
    length = locus.matched
    while node.parent is not None:
        yield node, length
        node = node.parent
        length = node.sdepth


def compute_ms_basic(pattern: str, index: "MSIndex") -> list[int]:
    """MS[i] = length of the longest prefix of P[i..m] occurring in T."""
    m = len(pattern)
    ms = [0] * m
    if m == 0 or index.parsing.B == 0:
        return ms
    trev, tsuf, grid = index.trev, index.tsuf, index.grid

    for i in range(1, m):
        loc1 = trev.search(pattern[:i][::-1])
        if loc1.matched == 0:
            continue
        loc2 = tsuf.search(pattern[i:])
        for node, length in _walk_nodes(loc1):
            _, plen = grid.partner_in_suf(node.xlo, node.xhi, loc2)
            lo = node.parent.sdepth
            for j in range(lo + 1, length + 1):
                k = i - j  # 0-based start of the candidate match
                cand = j + plen
                if cand > ms[k]:
                    ms[k] = cand

    # matches whose only boundary sits at their last character and which
    # end at the pattern end: pure left parts at the final split
    tail = trev.search(pattern[::-1])
    for j in range(1, tail.matched + 1):
        k = m - j
        if j > ms[k]:
            ms[k] = j

    for k in range(1, m):
        if ms[k - 1] - 1 > ms[k]:
            ms[k] = ms[k - 1] - 1
    return ms
