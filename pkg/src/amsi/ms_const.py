"""Matching statistics, solution 3: batched partner descent + dispatch.

Long patterns are routed to the LPMEM engine.  Short ones run the
split-walk of solution 1, but all partner results along one root-to-
locus path are produced by a single top-down descent: each tree node on
the top levels of the phrase tree stores the y-coordinates under it in
sorted order plus the child each one descends into, so predecessor /
successor / emptiness trackers move down an edge with two rank probes.
"""

from __future__ import annotations

import bisect
import math
from typing import TYPE_CHECKING

from amsi.counters import current_counters
from amsi.patricia import Locus, Node, PatriciaTree

if TYPE_CHECKING:  # pragma: no cover
    from amsi.grid import Grid
    from amsi.index import MSIndex


class ActiveLevelIndex:
    """Sorted point lists and child-rank sequences on the top tree levels."""

    def __init__(self, trev: PatriciaTree, grid: "Grid", epsilon: float):
        self.epsilon = epsilon
        B = grid.B
        lg = math.log2(B) if B >= 2 else 0.0
        self.levels = max(math.ceil(lg ** (1.0 + epsilon)), 1)
        self.s_arrays: dict[int, list[int]] = {}
        self.r_arrays: dict[int, list[int]] = {}
        self.rank_pos: dict[int, list[list[int]]] = {}
        if B == 0:
            self.s_arrays[trev.root.id] = []
            self.r_arrays[trev.root.id] = []
            self.rank_pos[trev.root.id] = []
            return
        x_of_y = grid.x_of_y
        stack: list[tuple[Node, list[int]]] = [(trev.root, list(range(1, B + 1)))]
        while stack:
            node, s = stack.pop()
            self.s_arrays[node.id] = s
            if not node.children:
                self.r_arrays[node.id] = []
                self.rank_pos[node.id] = []
                continue
            los = [c.xlo for c in node.children]
            r: list[int] = []
            pos: list[list[int]] = [[] for _ in node.children]
            parts: list[list[int]] = [[] for _ in node.children]
            for j, y in enumerate(s, start=1):
                slot = bisect.bisect_right(los, x_of_y[y - 1]) - 1
                r.append(slot)
                pos[slot].append(j)
                parts[slot].append(y)
            self.r_arrays[node.id] = r
            self.rank_pos[node.id] = pos
            if node.ndepth + 1 < self.levels:
                for c, part in zip(node.children, parts):
                    stack.append((c, part))

    def has(self, node_id: int) -> bool:
        return node_id in self.s_arrays

    def rank(self, node_id: int, slot: int, j: int) -> int:
        """Entries among the first j of R(node) descending into `slot`."""
        current_counters().rank_calls += 1
        return bisect.bisect_right(self.rank_pos[node_id][slot], j)


def build_active_index(trev: PatriciaTree, grid: "Grid", epsilon: float) -> ActiveLevelIndex:
    return ActiveLevelIndex(trev, grid, epsilon)


def _partner_from_counts(act: ActiveLevelIndex, node: Node, clo: int, chi: int,
                         loc2: Locus, tsuf: PatriciaTree) -> tuple[Node, int]:
    if clo < chi:
        return loc2.node, loc2.matched
    s = act.s_arrays[node.id]
    best: Node | None = None
    for y in ((s[clo - 1] if clo >= 1 else None), (s[chi] if chi < len(s) else None)):
        if y is None:
            continue
        anc = tsuf.lca(loc2.node, tsuf.rank_to_leaf[y - 1])
        if best is None or anc.ndepth > best.ndepth:
            best = anc
    if best is None:
        raise RuntimeError("descent over an empty point list")
    return best, best.sdepth


def descend_partner_batch(index: "MSIndex", loc1: Locus, loc2: Locus
                          ) -> dict[int, tuple[Node, int]]:
    """Partner of every non-root ancestor of the phrase-tree locus against
    the suffix-tree locus; two rank probes per edge while the path stays
    within the active levels, grid partners below them."""
    act = index.active
    if act is None:
        raise RuntimeError("index was built without the descent structures")
    path: list[Node] = []
    node = loc1.node
    while node is not None:
        path.append(node)
        node = node.parent
    path.reverse()
    out: dict[int, tuple[Node, int]] = {}
    ylo, yhi = loc2.node.xlo, loc2.node.xhi
    clo, chi = ylo - 1, yhi
    cur = path[0]
    for idx, child in enumerate(path[1:], start=1):
        if child.ndepth >= act.levels:
            for deep in path[idx:]:
                out[deep.id] = index.grid.partner_in_suf(deep.xlo, deep.xhi, loc2)
            break
        clo = act.rank(cur.id, child.slot, clo)
        chi = act.rank(cur.id, child.slot, chi)
        out[child.id] = _partner_from_counts(act, child, clo, chi, loc2, index.tsuf)
        cur = child
    return out


def dispatch_threshold(B: int, c: float) -> float:
    lg = math.log2(B) if B >= 2 else 1.0
    lglg = math.log2(lg) if lg >= 2.0 else 1.0
    return c * lg * lglg


def compute_ms_const(pattern: str, index: "MSIndex") -> list[int]:
    """Matching statistics with the length-based engine dispatch."""
    m = len(pattern)
    if m == 0 or index.parsing.B == 0:
        return [0] * m
    if m >= dispatch_threshold(index.parsing.B, index.dispatch_c):
        from amsi.ms_lpmem import compute_ms_lpmem

        return compute_ms_lpmem(pattern, index)

    trev = index.trev
    ms = [0] * m
    for i in range(1, m):
        loc1 = trev.search(pattern[:i][::-1])
        if loc1.matched == 0:
            continue
        loc2 = index.tsuf.search(pattern[i:])
        partners = descend_partner_batch(index, loc1, loc2)
        node = loc1.node
        length = loc1.matched
        while node.parent is not None:
            _, plen = partners[node.id]
            for j in range(node.parent.sdepth + 1, length + 1):
                k = i - j
                cand = j + plen
                if cand > ms[k]:
                    ms[k] = cand
            node = node.parent
            length = node.sdepth

    tail = trev.search(pattern[::-1])
    for j in range(1, tail.matched + 1):
        k = m - j
        if j > ms[k]:
            ms[k] = j
    for k in range(1, m):
        if ms[k - 1] - 1 > ms[k]:
            ms[k] = ms[k - 1] - 1
    return ms
