"""Matching statistics, solution 2: enumerate boundary-crossing maximal
matches (LPMEMs), then sweep.

An LPMEM is a pattern substring of length >= 2 that matches around some
phrase boundary (nonempty left part ending at the boundary, possibly
empty right part) and is extendable in neither direction at that split;
pattern edges count as non-extendable.  Per split the beginning nodes
live on a short path in the phrase tree; a heavy-path decomposition of
the suffix tree cuts the ending path into O(log B) segments, and
precomputed structures on the light segment tops let every emission
between the segment extremes be read off links without touching the
grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from amsi.patricia import Locus, Node, PatriciaTree

if TYPE_CHECKING:  # pragma: no cover
    from amsi.index import MSIndex


@dataclass(frozen=True, order=True)
class LPMEM:
    """A locally maximal boundary-crossing match: 1-based start in the
    pattern and its length."""

    start: int
    length: int


class HeavyPathDecomp:
    """Heavy-path decomposition: heavy child = most leaf descendants,
    ties to the leftmost.  The highest node of each path is light."""

    def __init__(self, tree: PatriciaTree):
        n = len(tree.nodes)
        self.hp_root: list[Node] = [None] * n  # type: ignore[list-item]
        self.hp_leaf: list[Node] = [None] * n  # type: ignore[list-item]
        self.light = [False] * n
        heavy: list[Node | None] = [None] * n
        for node in tree.nodes:  # preorder: parents first
            if node.children:
                heavy[node.id] = max(node.children, key=lambda c: c.nleaves)
        for node in tree.nodes:
            parent = node.parent
            is_light = parent is None or heavy[parent.id] is not node
            self.light[node.id] = is_light
            self.hp_root[node.id] = node if is_light else self.hp_root[parent.id]
        for node in reversed(tree.nodes):  # bottom-up
            h = heavy[node.id]
            self.hp_leaf[node.id] = node if h is None else self.hp_leaf[h.id]

    def light_nodes(self, tree: PatriciaTree) -> list[Node]:
        return [node for node in tree.nodes if self.light[node.id]]


def heavy_path_decompose(tree: PatriciaTree) -> HeavyPathDecomp:
    return HeavyPathDecomp(tree)


class _SubNode:
    """Node of the contracted tree over one light node's special set."""

    __slots__ = ("rev", "parent", "children", "gmax", "suf_partner", "sky", "child_ok",
                 "up_sky", "up_slot")

    def __init__(self, rev: Node):
        self.rev = rev                      # original phrase-tree node
        self.parent: _SubNode | None = None
        self.children: list[_SubNode] = []
        self.gmax = -1                      # deepest suffix-path level induced below
        self.suf_partner: Node | None = None  # partner against the heavy-path leaf
        self.sky = False
        self.child_ok: list[bool] = []      # per child: child direction still induced
        self.up_sky: _SubNode | None = None  # lowest proper skyline ancestor
        self.up_slot = -1                   # child slot of up_sky we hang under


class LightStructure:
    """Per light suffix-tree node: its special leaves, their LCA-closed
    contraction, and the links used to report in-between beginnings."""

    def __init__(self, w: Node, special_leaves: list[Node], subnodes: list[_SubNode]):
        self.w = w
        self.special_leaves = special_leaves
        self.subnodes = subnodes
        self.lookup = {sn.rev.id: sn for sn in subnodes}

    @property
    def size(self) -> int:
        return len(self.subnodes)


def _build_light(w: Node, index: "MSIndex") -> LightStructure:
    trev, tsuf, grid = index.trev, index.tsuf, index.grid
    hp = index.hp_suf
    hpleaf = hp.hp_leaf[w.id]
    path_by_depth: list[Node] = [None] * (hpleaf.ndepth + 1)  # type: ignore[list-item]
    node = hpleaf
    while node is not None:
        path_by_depth[node.ndepth] = node
        node = node.parent

    # special leaves of the phrase tree, with the deepest suffix-path
    # level each one reaches (for partner links)
    leaf_gmax: dict[int, int] = {}
    leaf_by_id: dict[int, Node] = {}
    for y in range(w.xlo, w.xhi + 1):
        sleaf = tsuf.rank_to_leaf[y - 1]
        k = sleaf.boundaries[0]
        g = tsuf.lca(sleaf, hpleaf).ndepth
        rleaf = trev.rank_to_leaf[grid.x_of_boundary[k] - 1]
        leaf_by_id[rleaf.id] = rleaf
        if g > leaf_gmax.get(rleaf.id, -1):
            leaf_gmax[rleaf.id] = g

    special_leaves = sorted(leaf_by_id.values(), key=lambda nd: nd.id)
    members: dict[int, Node] = {leaf.id: leaf for leaf in special_leaves}
    for a, b in zip(special_leaves, special_leaves[1:]):
        anc = trev.lca(a, b)
        members[anc.id] = anc
    ordered = sorted(members.values(), key=lambda nd: nd.id)  # preorder

    subs = [_SubNode(nd) for nd in ordered]
    stack: list[_SubNode] = []
    for sn in subs:
        while stack and trev.lca(stack[-1].rev, sn.rev) is not stack[-1].rev:
            stack.pop()
        if stack:
            sn.parent = stack[-1]
            stack[-1].children.append(sn)
        stack.append(sn)

    # deepest induced suffix-path level, bottom-up
    for sn in reversed(subs):
        g = leaf_gmax.get(sn.rev.id, -1)
        for c in sn.children:
            if c.gmax > g:
                g = c.gmax
        sn.gmax = g
        sn.suf_partner = path_by_depth[g]

    for sn in subs:
        sn.child_ok = []
        sky = False
        for c in sn.children:
            ok = c.gmax >= sn.suf_partner.ndepth  # direction child still induced
            sn.child_ok.append(ok)
            if c.children and not ok:
                sky = True
        sn.sky = sky

    # skyline ancestor links, DFS with (skyline, slot) propagation
    walk: list[tuple[_SubNode, _SubNode | None, int]] = [(subs[0], None, -1)] if subs else []
    while walk:
        sn, up, slot = walk.pop()
        sn.up_sky = up
        sn.up_slot = slot
        for s, c in enumerate(sn.children):
            if sn.sky:
                walk.append((c, sn, s))
            else:
                walk.append((c, up, slot))

    return LightStructure(w, special_leaves, subs)


def build_special_structures(index: "MSIndex") -> dict[int, LightStructure]:
    """One structure per light node of the suffix tree."""
    out: dict[int, LightStructure] = {}
    if index.parsing.B == 0:
        return out
    for w in index.tsuf.nodes:
        if index.hp_suf.light[w.id]:
            out[w.id] = _build_light(w, index)
    return out


def _sub_child_toward(sub: _SubNode, x: int) -> int:
    """Slot of the contraction child whose interval contains rank x."""
    for s, c in enumerate(sub.children):
        if c.rev.xlo <= x <= c.rev.xhi:
            return s
    return -1


def enumerate_lpmems(pattern: str, index: "MSIndex") -> set[LPMEM]:
    """All LPMEMs of the pattern, deduplicated by (start, length)."""
    m = len(pattern)
    out: set[LPMEM] = set()
    if m == 0 or index.parsing.B == 0:
        return out
    trev, tsuf, grid = index.trev, index.tsuf, index.grid
    hp = index.hp_suf
    structures = index.special
    if structures is None:
        raise RuntimeError("index was built without the LPMEM structures")
    root_rev = trev.root

    def emit(start: int, length: int) -> None:
        if length >= 2:
            out.add(LPMEM(start, length))

    for i in range(1, m + 1):
        loc1 = trev.search(pattern[:i][::-1])
        t1 = loc1.matched
        if t1 == 0:
            continue
        if i == m:
            # empty right part; only the deepest left part is maximal
            emit(m - t1 + 1, t1)
            continue
        loc2 = tsuf.search(pattern[i:])
        t2 = loc2.matched
        n1, n2 = loc1.node, loc2.node
        if not grid.range_empty(n1.xlo, n1.xhi, n2.xlo, n2.xhi):
            emit(i - t1 + 1, t1 + t2)
            continue

        pl_node, pl_len = grid.partner_in_suf(n1.xlo, n1.xhi, loc2)
        pr_node, pr_len = grid.partner_in_rev(n2.xlo, n2.xhi, loc1)

        # heavy-path segments of the ending path, bottom-up then reversed
        segs: list[tuple[Node, Node]] = []
        cur = n2
        top_path = hp.hp_root[pl_node.id]
        while True:
            wf = hp.hp_root[cur.id]
            segs.append((wf, cur))
            if wf is top_path:
                break
            cur = wf.parent
        segs.reverse()
        last = len(segs) - 1

        for f, (wf, tf) in enumerate(segs):
            if f == 0:
                beta, beta_len = n1, t1  # partner against the top segment
            else:
                beta, beta_len = grid.partner_in_rev(wf.xlo, wf.xhi, loc1)
            if f == last:
                alpha, alpha_len = pr_node, pr_len
            else:
                alpha, alpha_len = grid.partner_in_rev(tf.xlo, tf.xhi, loc1)

            if alpha is not root_rev:
                if alpha is n1:
                    end_node, end_len = pl_node, pl_len
                else:
                    end_node, end_len = grid.partner_in_suf(alpha.xlo, alpha.xhi, loc2)
                emit(i - alpha_len + 1, alpha_len + end_len)
            if beta is not alpha and beta is not root_rev:
                if beta is n1:
                    end_node, end_len = pl_node, pl_len
                else:
                    end_node, end_len = grid.partner_in_suf(beta.xlo, beta.xhi, loc2)
                emit(i - beta_len + 1, beta_len + end_len)

            # beginnings strictly between beta and alpha: the lowest
            # special node above beta, then skyline links upward
            if beta is alpha or beta is root_rev or beta.ndepth - alpha.ndepth < 2:
                continue
            struct = structures[wf.id]
            lx = grid.min_x_in(beta.xlo, beta.xhi, wf.xlo, wf.xhi)
            if lx is None:
                continue
            lleaf = trev.rank_to_leaf[lx - 1]
            vlow: Node | None = None
            px = grid.range_pred_x(wf.xlo, wf.xhi, beta.xlo)
            sx = grid.range_succ_x(wf.xlo, wf.xhi, beta.xhi)
            for ox in (px, sx):
                if ox is None:
                    continue
                cand = trev.lca(lleaf, trev.rank_to_leaf[ox - 1])
                if vlow is None or cand.ndepth > vlow.ndepth:
                    vlow = cand
            if vlow is None or vlow.ndepth <= alpha.ndepth:
                continue
            sub = struct.lookup.get(vlow.id)
            if sub is None:
                raise AssertionError("special node missing from contraction")
            slot = _sub_child_toward(sub, lx)
            if slot >= 0 and not sub.child_ok[slot]:
                e2 = sub.e2
                e2_len = t2 if e2 is n2 else e2.sdepth
                emit(i - vlow.sdepth + 1, vlow.sdepth + e2_len)
            cur_sub = sub
            while cur_sub.up_sky is not None:
                nxt = cur_sub.up_sky
                if nxt.rev.ndepth <= alpha.ndepth:
                    break
                if not nxt.child_ok[cur_sub.up_slot]:
                    e2 = nxt.e2
                    e2_len = t2 if e2 is n2 else e2.sdepth
                    emit(i - nxt.rev.sdepth + 1, nxt.rev.sdepth + e2_len)
                cur_sub = nxt
    return out


def lpmems_to_ms(lpmems, m: int, pm_match: bool) -> list[int]:
    """Sweep the per-start maxima with a running decremented maximum; the
    last entry is floored by whether the final character matches."""
    best = [0] * (m + 1)
    for lp in lpmems:
        if lp.length > best[lp.start]:
            best[lp.start] = lp.length
    ms = [0] * m
    cur = 0
    for i in range(1, m + 1):
        if cur <= best[i]:
            cur = best[i]
        ms[i - 1] = cur
        if cur > 0:
            cur -= 1
    if m and pm_match and ms[m - 1] < 1:
        ms[m - 1] = 1
    return ms


def compute_ms_lpmem(pattern: str, index: "MSIndex") -> list[int]:
    """Matching statistics via LPMEM enumeration.

    Single-character matches never form LPMEMs (length >= 2), so each
    entry is additionally floored by whether its character occurs in the
    text at all (equivalently: heads some reversed phrase).
    """
    m = len(pattern)
    if m == 0 or index.parsing.B == 0:
        return [0] * m
    lpmems = enumerate_lpmems(pattern, index)
    best = [0] * (m + 1)
    for lp in lpmems:
        if lp.length > best[lp.start]:
            best[lp.start] = lp.length
    heads = index.trev.root.child_by_first
    ms = [0] * m
    prev = 0
    for i in range(m):
        single = 1 if pattern[i] in heads else 0
        ms[i] = max(prev - 1, best[i + 1], single)
        prev = ms[i]
    return ms
