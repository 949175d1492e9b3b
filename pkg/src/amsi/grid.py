"""Rank-space grid over the parsing boundaries.

One point per boundary: x = rank of its reversed phrase (ties broken by
boundary position), y = rank of its following suffix (the empty suffix
ranks first).  A wavelet-tree decomposition answers range emptiness,
range predecessor and range successor in O(log B); a dual decomposition
with the axes swapped serves the x-oriented queries.  The partner
operation (lowest ancestor of a node in one tree induced with a node of
the other) reduces to one emptiness plus predecessor/successor probes.
"""

from __future__ import annotations

from amsi.attractor import Parsing
from amsi.counters import current_counters
from amsi.patricia import Locus, Node, PatriciaTree


class WaveletTree:
    """Static wavelet matrix over 0-based values in [0, universe)."""

    def __init__(self, values: list[int], universe: int):
        self.n = len(values)
        self.nbits = max(1, (max(universe - 1, 1)).bit_length())
        self.ones_pref: list[list[int]] = []
        self.zeros: list[int] = []
        cur = list(values)
        for level in range(self.nbits - 1, -1, -1):
            bit = 1 << level
            pref = [0] * (self.n + 1)
            ones = 0
            for i, v in enumerate(cur):
                if v & bit:
                    ones += 1
                pref[i + 1] = ones
            self.ones_pref.append(pref)
            self.zeros.append(self.n - ones)
            cur = [v for v in cur if not (v & bit)] + [v for v in cur if v & bit]

    def count_less(self, l: int, r: int, v: int) -> int:
        """Number of values < v among positions [l, r)."""
        if l >= r or v <= 0:
            return 0
        if v >= (1 << self.nbits):
            return r - l
        res = 0
        for idx in range(self.nbits):
            pref = self.ones_pref[idx]
            bit = 1 << (self.nbits - 1 - idx)
            l1, r1 = pref[l], pref[r]
            if v & bit:
                res += (r - r1) - (l - l1)
                z = self.zeros[idx]
                l, r = z + l1, z + r1
            else:
                l, r = l - l1, r - r1
            if l >= r:
                break
        return res

    def kth(self, l: int, r: int, k: int) -> int:
        """k-th smallest value (1-based k) among positions [l, r)."""
        val = 0
        for idx in range(self.nbits):
            pref = self.ones_pref[idx]
            bit = 1 << (self.nbits - 1 - idx)
            l1, r1 = pref[l], pref[r]
            zeros_in = (r - l) - (r1 - l1)
            if k <= zeros_in:
                l, r = l - l1, r - r1
            else:
                k -= zeros_in
                val |= bit
                z = self.zeros[idx]
                l, r = z + l1, z + r1
        return val


class Grid:
    """B points in rank space with range queries and partner finding."""

    def __init__(self, y_of_x: list[int], trev: PatriciaTree, tsuf: PatriciaTree,
                 x_of_boundary: list[int], y_of_boundary: list[int]):
        self.B = len(y_of_x)
        self.y_of_x = y_of_x
        self.x_of_y = [0] * self.B
        for x, y in enumerate(y_of_x, start=1):
            self.x_of_y[y - 1] = x
        self.x_of_boundary = x_of_boundary
        self.y_of_boundary = y_of_boundary
        self.trev = trev
        self.tsuf = tsuf
        self._wy = WaveletTree([y - 1 for y in y_of_x], max(self.B, 1))
        self._wx = WaveletTree([x - 1 for x in self.x_of_y], max(self.B, 1))

    # ---- internal, uncounted probes --------------------------------
    def _box_count(self, x1: int, x2: int, y1: int, y2: int) -> int:
        if x1 > x2 or y1 > y2:
            return 0
        return self._wy.count_less(x1 - 1, x2, y2) - self._wy.count_less(x1 - 1, x2, y1 - 1)

    def _pred_y(self, x1: int, x2: int, y: int) -> int | None:
        if x1 > x2:
            return None
        c = self._wy.count_less(x1 - 1, x2, y - 1)
        if c == 0:
            return None
        return self._wy.kth(x1 - 1, x2, c) + 1

    def _succ_y(self, x1: int, x2: int, y: int) -> int | None:
        if x1 > x2:
            return None
        c = self._wy.count_less(x1 - 1, x2, y)
        if c >= x2 - x1 + 1:
            return None
        return self._wy.kth(x1 - 1, x2, c + 1) + 1

    def _min_x(self, x1: int, x2: int, y1: int, y2: int) -> int | None:
        if x1 > x2 or y1 > y2:
            return None
        c = self._wx.count_less(y1 - 1, y2, x1 - 1)
        if c >= y2 - y1 + 1:
            return None
        cand = self._wx.kth(y1 - 1, y2, c + 1) + 1
        return cand if cand <= x2 else None

    def _max_x(self, x1: int, x2: int, y1: int, y2: int) -> int | None:
        if x1 > x2 or y1 > y2:
            return None
        c = self._wx.count_less(y1 - 1, y2, x2)
        if c == 0:
            return None
        cand = self._wx.kth(y1 - 1, y2, c) + 1
        return cand if cand >= x1 else None

    # ---- counted public operations ---------------------------------
    def range_empty(self, x1: int, x2: int, y1: int, y2: int) -> bool:
        current_counters().range_queries += 1
        return self._box_count(x1, x2, y1, y2) == 0

    def range_pred(self, x1: int, x2: int, y: int) -> int | None:
        """Largest y' < y among points with x in [x1, x2]."""
        current_counters().range_queries += 1
        return self._pred_y(x1, x2, y)

    def range_succ(self, x1: int, x2: int, y: int) -> int | None:
        """Smallest y' > y among points with x in [x1, x2]."""
        current_counters().range_queries += 1
        return self._succ_y(x1, x2, y)

    def range_pred_x(self, y1: int, y2: int, x: int) -> int | None:
        """Largest x' < x among points with y in [y1, y2]."""
        current_counters().range_queries += 1
        return self._max_x(1, x - 1, y1, y2)

    def range_succ_x(self, y1: int, y2: int, x: int) -> int | None:
        """Smallest x' > x among points with y in [y1, y2]."""
        current_counters().range_queries += 1
        return self._min_x(x + 1, self.B, y1, y2)

    def min_x_in(self, x1: int, x2: int, y1: int, y2: int) -> int | None:
        current_counters().range_queries += 1
        return self._min_x(x1, x2, y1, y2)

    def max_x_in(self, x1: int, x2: int, y1: int, y2: int) -> int | None:
        current_counters().range_queries += 1
        return self._max_x(x1, x2, y1, y2)

    def _is_rev_node(self, node: Node) -> bool:
        nodes = self.trev.nodes
        return node.id < len(nodes) and nodes[node.id] is node

    def induced(self, u: Node, v: Node) -> bool:
        """Do a T_rev node and a T_suf node share a boundary?

        Arguments may come in either order; one must belong to each tree.
        """
        current_counters().range_queries += 1
        if self._is_rev_node(u):
            rev, suf = u, v
        else:
            rev, suf = v, u
        return self._box_count(rev.xlo, rev.xhi, suf.xlo, suf.xhi) > 0

    # ---- partner ----------------------------------------------------
    def partner_in_suf(self, x1: int, x2: int, locus: Locus) -> tuple[Node, int]:
        """Lowest ancestor of the suffix-tree locus induced with [x1, x2]."""
        current_counters().partner_calls += 1
        node = locus.node
        if self._box_count(x1, x2, node.xlo, node.xhi) > 0:
            return node, locus.matched
        best: Node | None = None
        yp = self._pred_y(x1, x2, node.xlo)
        ys = self._succ_y(x1, x2, node.xhi)
        for y in (yp, ys):
            if y is None:
                continue
            anc = self.tsuf.lca(node, self.tsuf.rank_to_leaf[y - 1])
            if best is None or anc.ndepth > best.ndepth:
                best = anc
        if best is None:
            raise RuntimeError("partner query over an empty interval")
        return best, best.sdepth

    def partner(self, u: Node, locus: Locus) -> tuple[Node, int]:
        """Lowest ancestor of the locus induced with node u of the other tree.

        Returns the ancestor and its effective label length (the locus's
        matched length when the ancestor is the locus node itself).
        """
        if self._is_rev_node(u):
            return self.partner_in_suf(u.xlo, u.xhi, locus)
        return self.partner_in_rev(u.xlo, u.xhi, locus)

    def partner_in_rev(self, y1: int, y2: int, locus: Locus) -> tuple[Node, int]:
        """Lowest ancestor of the phrase-tree locus induced with [y1, y2]."""
        current_counters().partner_calls += 1
        node = locus.node
        if self._box_count(node.xlo, node.xhi, y1, y2) > 0:
            return node, locus.matched
        best: Node | None = None
        xp = self._max_x(1, node.xlo - 1, y1, y2)
        xs = self._min_x(node.xhi + 1, self.B, y1, y2)
        for x in (xp, xs):
            if x is None:
                continue
            anc = self.trev.lca(node, self.trev.rank_to_leaf[x - 1])
            if best is None or anc.ndepth > best.ndepth:
                best = anc
        if best is None:
            raise RuntimeError("partner query over an empty interval")
        return best, best.sdepth


def build_grid(parsing: Parsing, trev: PatriciaTree, tsuf: PatriciaTree) -> Grid:
    """One point per boundary, consistent with both trees' leaf intervals."""
    B = parsing.B
    x_of = [0] * B
    y_of = [0] * B
    for leaf in trev.nodes:
        if leaf.is_leaf:
            for i, k in enumerate(leaf.boundaries):
                x_of[k] = leaf.xlo + i
    for leaf in tsuf.nodes:
        if leaf.is_leaf:
            y_of[leaf.boundaries[0]] = leaf.xlo
    y_of_x = [0] * B
    for k in range(B):
        y_of_x[x_of[k] - 1] = y_of[k]
    return Grid(y_of_x, trev, tsuf, x_of, y_of)
