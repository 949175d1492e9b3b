import itertools
import random

from amsi.attractor import boundaries_to_parsing, lz_parse
from amsi.counters import collect_counters
from amsi.oracle import generate_instances
from amsi.patricia import build_trees, find_all_loci, lca
from amsi.text_access import InMemoryText

from conftest import longest_prefix_present, naive_patricia


def _build(text, boundaries=None):
    parsing = lz_parse(text) if boundaries is None else boundaries_to_parsing(
        len(text), boundaries)
    oracle = InMemoryText(text)
    trev, tsuf = build_trees(parsing, oracle)
    return parsing, trev, tsuf


def _leaf_labels(tree):
    out = []
    seen = set()
    for leaf in tree.rank_to_leaf:
        if id(leaf) not in seen:
            seen.add(id(leaf))
            out.append(tree.label_prefix(leaf, leaf.sdepth))
    return out


def _rev_strings(text, parsing):
    return [text[s:e][::-1] for s, e in (parsing.phrase_span(k) for k in range(parsing.B))]


def _suf_strings(text, parsing):
    return [text[b:] for b in parsing.boundaries]


def test_build_trees_worked_example():
    _, trev, tsuf = _build("aaabbbcc", [3, 6, 8])
    assert _leaf_labels(trev) == ["aaa", "bbb", "cc"]
    assert _leaf_labels(tsuf) == ["", "bbbcc", "cc"]


def test_build_trees_duplicates_collapse():
    _, trev, tsuf = _build("aaaa", [1, 4])
    assert _leaf_labels(trev) == ["a", "aaa"]
    assert _leaf_labels(tsuf) == ["", "aaa"]
    parsing, trev, _ = _build("aab", [1, 2, 3])  # two "a" phrases share a leaf
    leaves = [l for l in trev.nodes if l.is_leaf]
    by_label = {trev.label_prefix(l, l.sdepth): l for l in leaves}
    assert by_label["a"].boundaries == (0, 1)
    assert (by_label["a"].xlo, by_label["a"].xhi) == (1, 2)


def test_build_trees_empty_text():
    _, trev, tsuf = _build("")
    assert len(trev.nodes) == 1 and len(tsuf.nodes) == 1
    assert trev.root.nleaves == 0


def test_trees_match_naive_patricia():
    rng = random.Random(31)
    for _ in range(30):
        n = rng.randint(1, 64)
        text = "".join(rng.choice("ab") for _ in range(n))
        parsing, trev, tsuf = _build(text)
        for tree, strings in ((trev, _rev_strings(text, parsing)),
                              (tsuf, _suf_strings(text, parsing))):
            want_leaves, want_internals = naive_patricia(strings)
            assert _leaf_labels(tree) == want_leaves
            got_internals = {tree.label_prefix(nd, nd.sdepth)
                             for nd in tree.nodes if not nd.is_leaf}
            assert got_internals == want_internals, (text, strings)


def test_interval_consistency():
    for inst in itertools.islice(generate_instances(8, "uniform", 128, 8, 4), 20):
        _, trev, tsuf = _build(inst.text, inst.boundaries)
        for tree in (trev, tsuf):
            for node in tree.nodes:
                if node.children:
                    assert node.xlo == node.children[0].xlo
                    assert node.xhi == node.children[-1].xhi
                    for a, b in zip(node.children, node.children[1:]):
                        assert a.xhi + 1 == b.xlo
                    assert node.nleaves == sum(c.nleaves for c in node.children)
                if node.parent is not None and node.sdepth > 0:
                    assert node.sdepth >= node.parent.sdepth


def test_suffix_tree_has_B_leaves():
    for inst in itertools.islice(generate_instances(12, "copy-paste", 200, 8, 2), 15):
        parsing, trev, tsuf = _build(inst.text, inst.boundaries)
        assert sum(1 for nd in tsuf.nodes if nd.is_leaf) == parsing.B
        total = sum(len(nd.boundaries) for nd in trev.nodes if nd.is_leaf)
        assert total == parsing.B


def test_find_all_loci_worked_example():
    _, trev, tsuf = _build("aaabbbcc", [3, 6, 8])
    pairs, pm = find_all_loci("ccabb", trev, tsuf)
    l1, l2 = pairs[1]  # split i = 2
    assert trev.label_prefix(l1.node, 2) == "cc" and l1.matched == 2
    assert l2.node is tsuf.root and l2.matched == 0
    l1, l2 = pairs[2]  # split i = 3
    assert l1.matched == 1 and trev.label_prefix(l1.node, l1.node.sdepth) == "aaa"
    assert l2.matched == 2 and tsuf.label_prefix(l2.node, l2.node.sdepth) == "bbbcc"


def test_find_all_loci_single_char():
    _, trev, tsuf = _build("aaabbbcc", [3, 6, 8])
    pairs, pm = find_all_loci("a", trev, tsuf)
    assert pairs == []
    assert pm is not None and pm.matched == 0  # no suffix starts with 'a'
    pairs, pm = find_all_loci("b", trev, tsuf)
    assert pm.matched == 1


def test_loci_match_naive_prefix_search():
    rng = random.Random(77)
    for _ in range(40):
        n = rng.randint(1, 96)
        text = "".join(rng.choice("ab") for _ in range(n))
        parsing, trev, tsuf = _build(text)
        revs = _rev_strings(text, parsing)
        sufs = _suf_strings(text, parsing)
        m = rng.randint(1, 24)
        pattern = "".join(rng.choice("ab") for _ in range(m))
        pairs, _pm = find_all_loci(pattern, trev, tsuf)
        for i, (l1, l2) in enumerate(pairs, start=1):
            assert l1.matched == longest_prefix_present(pattern[:i][::-1], revs)
            assert l2.matched == longest_prefix_present(pattern[i:], sufs)
            # locus node is the edge's lower endpoint of the matched prefix
            assert l1.matched <= l1.node.sdepth
            if l1.node.parent is not None:
                assert l1.matched > l1.node.parent.sdepth


def test_one_extraction_per_search():
    _, trev, tsuf = _build("abracadabra")
    with collect_counters() as c:
        trev.search("arb")
    assert c.chars_extracted <= 3


def test_lca_examples():
    _, trev, tsuf = _build("aaabbbcc", [3, 6, 8])
    leaf_bbbcc = tsuf.rank_to_leaf[1]
    leaf_cc = tsuf.rank_to_leaf[2]
    assert lca(tsuf, leaf_bbbcc, leaf_cc) is tsuf.root
    assert lca(tsuf, leaf_cc, leaf_cc) is leaf_cc
    assert lca(tsuf, tsuf.root, leaf_cc) is tsuf.root


def test_lca_random_against_path_walk():
    rng = random.Random(3)
    for _ in range(10):
        n = rng.randint(2, 80)
        text = "".join(rng.choice("abc") for _ in range(n))
        _, trev, _tsuf = _build(text)
        nodes = trev.nodes
        for _ in range(30):
            u, v = rng.choice(nodes), rng.choice(nodes)
            anc_u = set()
            node = u
            while node is not None:
                anc_u.add(id(node))
                node = node.parent
            node = v
            while id(node) not in anc_u:
                node = node.parent
            assert trev.lca(u, v) is node
