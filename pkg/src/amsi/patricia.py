"""Patricia trees over reversed phrases and boundary suffixes.

Two compressed tries index a parsing: one for the reversed phrases, one
for the suffixes following each boundary (including one empty suffix).
Edges store only a first character and a length; searches are blind and
verified against the text through the oracle with a single extraction.

Node intervals are kept in grid-rank units: x-ranks for the reversed
phrase tree (duplicate phrases collapse into one leaf spanning all their
boundaries' ranks), y-ranks for the suffix tree.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from amsi.attractor import Parsing
from amsi.suffixes import SuffixOrder
from amsi.text_access import TextOracle


class Node:
    __slots__ = (
        "id",
        "parent",
        "children",
        "child_by_first",
        "slot",
        "sdepth",
        "ndepth",
        "xlo",
        "xhi",
        "nleaves",
        "rep",
        "rep_len",
        "boundaries",
        "is_leaf",
    )

    def __init__(self, sdepth: int, rep: int, rep_len: int, is_leaf: bool,
                 boundaries: tuple[int, ...] = ()):
        self.id = -1
        self.parent: Node | None = None
        self.children: list[Node] = []
        self.child_by_first: dict[str | None, Node] = {}
        self.slot = 0
        self.sdepth = sdepth
        self.ndepth = 0
        self.xlo = 0
        self.xhi = 0
        self.nleaves = 0
        self.rep = rep
        self.rep_len = rep_len
        self.boundaries = boundaries
        self.is_leaf = is_leaf

    def __repr__(self):  # pragma: no cover
        return f"Node(id={self.id}, sdepth={self.sdepth}, x=[{self.xlo},{self.xhi}])"


@dataclass(frozen=True)
class Locus:
    """Where a search terminated: a node and the number of chars matched.

    matched may be smaller than the node's string depth when the match
    dies inside the incoming edge; the node is then the edge's lower
    endpoint and the matched prefix stands in for its label.
    """

    node: Node
    matched: int


class _LCAIndex:
    """Euler tour + sparse table; O(1) lowest-common-ancestor queries."""

    def __init__(self, root: Node, n_nodes: int):
        euler_nodes: list[Node] = []
        euler_depth: list[int] = []
        self.first = np.zeros(n_nodes, dtype=np.int64)
        seen = np.zeros(n_nodes, dtype=bool)
        stack: list[tuple[Node, int]] = [(root, 0)]
        while stack:
            node, ci = stack.pop()
            if not seen[node.id]:
                seen[node.id] = True
                self.first[node.id] = len(euler_nodes)
            euler_nodes.append(node)
            euler_depth.append(node.ndepth)
            if ci < len(node.children):
                stack.append((node, ci + 1))
                stack.append((node.children[ci], 0))
        self.euler = euler_nodes
        depth = np.array(euler_depth, dtype=np.int64)
        m = len(depth)
        levels = max(1, m.bit_length())
        table = np.empty((levels, m), dtype=np.int64)
        table[0] = np.arange(m)
        for k in range(1, levels):
            span = 1 << k
            half = span >> 1
            cnt = m - span + 1
            if cnt <= 0:
                table = table[:k]
                break
            left = table[k - 1, :cnt]
            right = table[k - 1, half : half + cnt]
            table[k, :cnt] = np.where(depth[left] <= depth[right], left, right)
        self.table = table
        self.depth = depth

    def lca(self, u: Node, v: Node) -> Node:
        a, b = int(self.first[u.id]), int(self.first[v.id])
        if a > b:
            a, b = b, a
        k = (b - a + 1).bit_length() - 1
        i = int(self.table[k, a])
        j = int(self.table[k, b - (1 << k) + 1])
        pick = i if self.depth[i] <= self.depth[j] else j
        return self.euler[pick]


class PatriciaTree:
    """Compressed trie with blind search verified through the text oracle."""

    def __init__(self, tag: str, nodes: list[Node], rank_to_leaf: list[Node],
                 oracle: TextOracle):
        self.tag = tag  # 'rev' or 'suf'
        self.nodes = nodes
        self.root = nodes[0]
        self.rank_to_leaf = rank_to_leaf
        self.oracle = oracle
        self._lca = _LCAIndex(self.root, len(nodes))

    @property
    def n_leaves(self) -> int:
        return self.root.nleaves

    def lca(self, u: Node, v: Node) -> Node:
        return self._lca.lca(u, v)

    def is_ancestor(self, anc: Node, node: Node) -> bool:
        return self._lca.lca(anc, node) is anc

    def label_prefix(self, node: Node, length: int) -> str:
        """First `length` characters of the node's path label."""
        if length == 0:
            return ""
        if self.tag == "suf":
            return self.oracle.extract(node.rep + 1, length)
        n = self.oracle.n
        return self.oracle.extract_reversed(n - node.rep - length + 1, length)

    def search(self, query: str) -> Locus:
        """Locus of the longest prefix of `query` present in the tree.

        Blind descent by first characters and edge lengths, then one
        verifying extraction against the text.
        """
        node = self.root
        qlen = len(query)
        while node.sdepth < qlen:
            child = node.child_by_first.get(query[node.sdepth])
            if child is None:
                break
            node = child
        blind = min(node.sdepth, qlen)
        label = self.label_prefix(node, blind)
        matched = 0
        while matched < blind and query[matched] == label[matched]:
            matched += 1
        while node.parent is not None and node.parent.sdepth >= matched:
            node = node.parent
        return Locus(node, matched)


def _assemble(items: list[tuple[int, int, tuple[int, ...]]], lcps: list[int],
              tag: str, label_source: str) -> tuple[list[Node], list[Node]]:
    """Build a Patricia tree from sorted distinct strings.

    items: (label start in source, string length, boundary ids) in
    lexicographic order; lcps[i] = LCP between items i-1 and i.
    """
    root = Node(0, 0, 0, False)
    if not items:
        return [root], []
    stack = [root]
    for idx, (start, length, bids) in enumerate(items):
        l = lcps[idx]
        last = None
        while stack[-1].sdepth > l or (stack[-1].is_leaf and stack[-1].sdepth == l):
            last = stack.pop()
        top = stack[-1]
        if top.sdepth < l:
            mid = Node(l, start, length, False)
            top.children[-1] = mid
            mid.parent = top
            mid.children.append(last)
            last.parent = mid
            stack.append(mid)
            top = mid
        leaf = Node(length, start, length, True, bids)
        top.children.append(leaf)
        leaf.parent = top
        stack.append(leaf)

    # preorder ids, node depths, slots, edge first characters
    nodes: list[Node] = []
    order: list[Node] = [root]
    while order:
        node = order.pop()
        node.id = len(nodes)
        nodes.append(node)
        for slot, child in enumerate(node.children):
            child.slot = slot
            child.ndepth = node.ndepth + 1
            first = None if child.sdepth == node.sdepth else label_source[child.rep + node.sdepth]
            node.child_by_first[first] = child
        order.extend(reversed(node.children))

    leaves_in_order = [node for node in nodes if node.is_leaf]
    return nodes, leaves_in_order


def _finalize_intervals(nodes: list[Node], leaves: list[Node],
                        spans: list[tuple[int, int]]) -> None:
    """Assign grid-rank intervals and leaf counts bottom-up."""
    for leaf, (lo, hi) in zip(leaves, spans):
        leaf.xlo, leaf.xhi = lo, hi
        leaf.nleaves = 1
    for node in reversed(nodes):
        if not node.is_leaf and node.children:
            node.xlo = node.children[0].xlo
            node.xhi = node.children[-1].xhi
            node.nleaves = sum(c.nleaves for c in node.children)


def build_trees(parsing: Parsing, oracle: TextOracle) -> tuple[PatriciaTree, PatriciaTree]:
    """Patricia trees over reversed phrases (T_rev) and boundary suffixes (T_suf)."""
    n = parsing.n
    text = oracle.extract(1, n) if n else ""
    rev = text[::-1]
    B = parsing.B

    if B == 0:
        root_rev = Node(0, 0, 0, False)
        root_suf = Node(0, 0, 0, False)
        root_rev.id = root_suf.id = 0
        return (PatriciaTree("rev", [root_rev], [], oracle),
                PatriciaTree("suf", [root_suf], [], oracle))

    so_rev = SuffixOrder(rev)
    so_fwd = SuffixOrder(text)

    # ---- T_rev: reversed phrases, sorted; equal phrases share a leaf ----
    # reversed phrase of boundary k starts at n - b_k in rev, length = phrase length
    starts = [n - parsing.boundaries[k] for k in range(B)]
    lens = [parsing.boundaries[k] - (parsing.boundaries[k - 1] if k else 0) for k in range(B)]

    def cmp_rev(a: int, b: int) -> int:
        c = so_rev.compare_prefixes(starts[a], lens[a], starts[b], lens[b])
        return c if c else (a - b)

    order_rev = sorted(range(B), key=functools.cmp_to_key(cmp_rev))
    x_of_boundary = [0] * B
    for x0, k in enumerate(order_rev):
        x_of_boundary[k] = x0 + 1

    groups: list[list[int]] = [[order_rev[0]]]
    for prev, k in zip(order_rev, order_rev[1:]):
        if so_rev.compare_prefixes(starts[prev], lens[prev], starts[k], lens[k]) == 0:
            groups[-1].append(k)
        else:
            groups.append([k])
    rev_items = [(starts[g[0]], lens[g[0]], tuple(g)) for g in groups]
    rev_lcps = [0] + [
        so_rev.lcp_prefixes(starts[a[0]], lens[a[0]], starts[b[0]], lens[b[0]])
        for a, b in zip(groups, groups[1:])
    ]
    rev_nodes, rev_leaves = _assemble(rev_items, rev_lcps, "rev", rev)
    pos = 1
    rev_spans = []
    for g in groups:
        rev_spans.append((pos, pos + len(g) - 1))
        pos += len(g)
    _finalize_intervals(rev_nodes, rev_leaves, rev_spans)
    rank_to_leaf_rev: list[Node] = []
    for leaf, g in zip(rev_leaves, groups):
        rank_to_leaf_rev.extend([leaf] * len(g))

    # ---- T_suf: suffixes after each boundary; empty suffix ranks first ----
    suf_starts = [parsing.boundaries[k] for k in range(B)]

    def suf_key(k: int):
        s = suf_starts[k]
        return (0, 0) if s == n else (1, int(so_fwd.rank[s]))

    order_suf = sorted(range(B), key=suf_key)
    suf_items = [(suf_starts[k], n - suf_starts[k], (k,)) for k in order_suf]
    suf_lcps = [0]
    for a, b in zip(order_suf, order_suf[1:]):
        sa_, sb_ = suf_starts[a], suf_starts[b]
        suf_lcps.append(0 if sa_ == n or sb_ == n else so_fwd.lcp_suffixes(sa_, sb_))
    suf_nodes, suf_leaves = _assemble(suf_items, suf_lcps, "suf", text)
    _finalize_intervals(suf_nodes, suf_leaves, [(i + 1, i + 1) for i in range(B)])

    trev = PatriciaTree("rev", rev_nodes, rank_to_leaf_rev, oracle)
    tsuf = PatriciaTree("suf", suf_nodes, suf_leaves, oracle)
    return trev, tsuf


def find_all_loci(pattern: str, trev: PatriciaTree, tsuf: PatriciaTree
                  ) -> tuple[list[tuple[Locus, Locus]], Locus | None]:
    """Loci of every prefix/suffix split of the pattern, plus the locus of
    the last character in the suffix tree."""
    m = len(pattern)
    pairs = []
    for i in range(1, m):
        pairs.append((trev.search(pattern[:i][::-1]), tsuf.search(pattern[i:])))
    pm_locus = tsuf.search(pattern[-1]) if m else None
    return pairs, pm_locus


def lca(tree: PatriciaTree, u: Node, v: Node) -> Node:
    return tree.lca(u, v)
