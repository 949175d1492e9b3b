import itertools
import math
import random

from amsi.counters import collect_counters
from amsi.index import build_index
from amsi.ms_basic import compute_ms_basic
from amsi.ms_const import (
    build_active_index,
    compute_ms_const,
    descend_partner_batch,
    dispatch_threshold,
)
from amsi.ms_lpmem import compute_ms_lpmem
from amsi.oracle import generate_instances, naive_ms
from amsi.patricia import Locus


def test_active_index_worked_example(example_index):
    idx = example_index
    act = idx.active
    root = idx.trev.root
    assert act.s_arrays[root.id] == [1, 2, 3]
    assert [s + 1 for s in act.r_arrays[root.id]] == [3, 1, 2]
    leaf_aaa = idx.trev.rank_to_leaf[0]
    assert act.s_arrays[leaf_aaa.id] == [2]


def test_active_index_empty():
    idx = build_index("")
    assert idx.active.s_arrays[idx.trev.root.id] == []


def test_descent_example(example_index):
    idx = example_index
    leaf_aaa = idx.trev.rank_to_leaf[0]
    leaf_cc = idx.tsuf.rank_to_leaf[2]
    loc1 = Locus(leaf_aaa, leaf_aaa.sdepth)
    loc2 = Locus(leaf_cc, leaf_cc.sdepth)
    out = descend_partner_batch(idx, loc1, loc2)
    node, length = out[leaf_aaa.id]
    assert node is idx.tsuf.root and length == 0
    want = idx.grid.partner_in_suf(leaf_aaa.xlo, leaf_aaa.xhi, loc2)
    assert (node, length) == want


def test_descent_matches_grid_partner():
    rng = random.Random(81)
    paths = 0
    for inst in itertools.islice(generate_instances(82, "uniform", 160, 24, 4), 40):
        idx = build_index(inst.text, inst.boundaries)
        m = len(inst.pattern)
        for i in range(1, m + 1):
            loc1 = idx.trev.search(inst.pattern[:i][::-1])
            if loc1.node.parent is None:
                continue
            loc2 = idx.tsuf.search(inst.pattern[i:]) if i < m else Locus(idx.tsuf.root, 0)
            got = descend_partner_batch(idx, loc1, loc2)
            node = loc1.node
            while node.parent is not None:
                want = idx.grid.partner_in_suf(node.xlo, node.xhi, loc2)
                assert got[node.id] == want, (inst.text, inst.pattern, i)
                node = node.parent
            paths += 1
    assert paths >= 400


def test_rank_call_bound():
    for inst in itertools.islice(generate_instances(83, "uniform", 128, 16, 2), 20):
        idx = build_index(inst.text, inst.boundaries)
        pattern = inst.pattern
        if len(pattern) >= dispatch_threshold(idx.parsing.B, idx.dispatch_c):
            continue
        budget = 0
        for i in range(1, len(pattern)):
            loc1 = idx.trev.search(pattern[:i][::-1])
            if loc1.matched:
                budget += 3 * loc1.node.ndepth + 8
        with collect_counters() as c:
            compute_ms_const(pattern, idx)
        assert c.rank_calls <= budget


def test_dispatch_routes():
    idx = build_index("abracadabra" * 8)
    thresh = dispatch_threshold(idx.parsing.B, idx.dispatch_c)
    short = "abr"[: max(1, int(thresh) - 1)]
    with collect_counters() as c:
        compute_ms_const(short, idx)
    if len(short) < thresh:
        assert c.rank_calls > 0 or len(short) <= 1
    long_pat = "abracadabra" * 3
    assert len(long_pat) >= thresh
    with collect_counters() as c:
        got = compute_ms_const(long_pat, idx)
    assert c.rank_calls == 0  # delegated to the LPMEM engine
    assert got == compute_ms_lpmem(long_pat, idx)


def test_worked_example(example_index):
    assert compute_ms_const("ccabb", example_index) == [2, 1, 3, 2, 1]


def test_single_char_patterns(example_index):
    assert compute_ms_const("a", example_index) == [1]
    assert compute_ms_const("z", example_index) == [0]


def test_three_engines_agree():
    for fam in ("uniform", "fibonacci", "copy-paste"):
        for inst in itertools.islice(generate_instances(84, fam, 200, 32, 2), 15):
            idx = build_index(inst.text, inst.boundaries)
            want = naive_ms(inst.text, inst.pattern)
            assert compute_ms_basic(inst.pattern, idx) == want
            assert compute_ms_lpmem(inst.pattern, idx) == want
            assert compute_ms_const(inst.pattern, idx) == want


def test_epsilon_controls_levels():
    text = "abcdabcdabcd" * 4
    idx_small = build_index(text, epsilon=0.25)
    idx_large = build_index(text, epsilon=1.0)
    assert idx_large.active.levels >= idx_small.active.levels
    B = idx_small.parsing.B
    assert idx_small.active.levels == max(math.ceil(math.log2(B) ** 1.25), 1)
