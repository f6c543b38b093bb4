import itertools
import math
import random

import pytest

from patmat.core.errors import PatmatError
from patmat.trees import (
    NodeDictionary,
    PaddedPattern,
    TpsStats,
    TreeIndex,
    down,
    micro_decompose,
    parse_tree,
    tps_fast,
    tps_simple,
)

from conftest import all_trees, random_tree, tps_oracle

REF_P = "a(c(a),b)"
REF_T = "a(c(a(b),b(b)))"
REF_PAIRS = {(1, 1), (2, 1), (2, 2)}


def test_down_examples():
    p = parse_tree(REF_P)
    assert down(p, {0}, "a") == {1, 3}
    assert down(p, {1, 3}, "c") == {2, 3}
    assert down(p, {1, 3}, "z") == {1, 3}


def test_reference_instance_simple_and_fast():
    p, t = parse_tree(REF_P), parse_tree(REF_T)
    assert tps_simple(p, t) == REF_PAIRS
    for s in (2, 4, 8):
        assert tps_fast(p, t, s) == REF_PAIRS


def test_single_node_pattern():
    p = parse_tree("a")
    t = parse_tree("b(a(c),d,a)")
    assert tps_simple(p, t) == {(1, 1), (1, 3)}


def test_path_against_path():
    rng = random.Random(2)
    for _ in range(100):
        a = "".join(rng.choice("ab") for _ in range(rng.randint(1, 5)))
        b = "".join(rng.choice("ab") for _ in range(rng.randint(1, 8)))
        p = parse_tree("(".join(a) + ")" * (len(a) - 1))
        t = parse_tree("(".join(b) + ")" * (len(b) - 1))
        want = {(1, 1)} if tps_oracle(p, t) else set()
        assert tps_fast(p, t, 2) == want
        assert tps_simple(p, t) == want


def _antichain(p, xs):
    ix = TreeIndex(p)
    return not any(u != v and ix.is_ancestor(u, v) for u in xs for v in xs)


def test_up_undoes_down_and_states_stay_antichains():
    rng = random.Random(4)
    for _ in range(100):
        padded = PaddedPattern(random_tree(rng, rng.randint(1, 12)))
        pt = padded.tree
        nd = NodeDictionary(pt, [pt.root])
        history = []
        for step in range(10):
            before = nd.state()
            by_label = {k: set(v) for k, v in nd.by_label.items()}
            label = rng.choice("ab")
            nd.down(step, label)
            after = nd.state()
            assert after == down(pt, before, label)
            assert _antichain(pt, after)
            history.append((step, before, by_label))
        for step, before, by_label in reversed(history):
            nd.up(step)
            assert nd.state() == before
            assert {k: set(v) for k, v in nd.by_label.items()} == by_label


def test_exhaustive_small_pairs():
    trees = all_trees(4)
    for p, t in itertools.product(trees, repeat=2):
        want = tps_oracle(p, t)
        assert tps_simple(p, t) == want
        assert tps_fast(p, t, 2) == want


@pytest.mark.slow
def test_random_pairs_all_micro_sizes():
    rng = random.Random(6)
    for _ in range(300):
        p = random_tree(rng, rng.randint(1, 40))
        t = random_tree(rng, rng.randint(1, 40))
        want = tps_simple(p, t)
        assert want == tps_oracle(p, t)
        for s in (2, 4, 8):
            assert tps_fast(p, t, s) == want


def _check_decomposition(p, dec, s):
    cover = set()
    for m in dec.micro_trees:
        assert 1 <= len(m.nodes) <= s
        cover.update(m.nodes)
        members = set(m.nodes)
        # connected: every non-root member has its parent inside
        for v in m.nodes:
            if v != m.root:
                assert p.parent[v] in members
    assert cover == set(range(p.size))
    for a, b in itertools.combinations(dec.micro_trees, 2):
        shared = set(a.nodes) & set(b.nodes)
        assert len(shared) <= 1
        if shared:
            (v,) = shared
            assert v in (a.root, b.root)
    bound = 4 * math.ceil(p.size / s) + 1
    assert len(dec) <= bound


def test_micro_decompose_examples():
    single = parse_tree("a")
    assert len(micro_decompose(single, 3)) == 1

    path = parse_tree("a(b(c(d(e(f(g))))))")
    dec = micro_decompose(path, 3)
    _check_decomposition(path, dec, 3)
    assert len(dec) <= 5

    full = parse_tree("a(b(d(h,i),e(j,k)),c(f(l,m),g(n,o)))")
    dec = micro_decompose(full, 4)
    _check_decomposition(full, dec, 4)


def test_micro_decompose_random_invariants():
    rng = random.Random(8)
    for _ in range(200):
        p = random_tree(rng, rng.randint(1, 60))
        s = rng.choice((2, 3, 4, 8, 16))
        _check_decomposition(p, micro_decompose(p, s), s)


def test_child_tables_match_direct_computation():
    rng = random.Random(10)
    for _ in range(50):
        p = random_tree(rng, rng.randint(1, 40))
        dec = micro_decompose(p, 6)
        for m in dec.micro_trees:
            table = dec.tables[m.shape]
            assert table is not None
            for mask in range(1 << len(m.nodes)):
                want = 0
                for i, v in enumerate(m.nodes):
                    if mask >> i & 1:
                        for c in p.children[v]:
                            if c in m.nodes:
                                want |= 1 << m.nodes.index(c)
                assert table[mask] == want


def test_tables_fall_back_over_budget():
    p, t = parse_tree(REF_P), parse_tree(REF_T)
    stats = TpsStats()
    assert tps_fast(p, t, 8, budget=1, stats=stats) == REF_PAIRS
    assert stats.table_hits == 0
    assert stats.direct_computations > 0


def test_live_states_logarithmic():
    rng = random.Random(12)
    p = random_tree(rng, 20)
    for n in (10, 100, 1000, 10000):
        t = random_tree(rng, n)
        stats = TpsStats()
        tps_fast(p, t, 8, stats=stats)
        assert stats.max_live_states <= math.log2(n) + 3


def test_micro_size_above_word_rejected():
    with pytest.raises(ValueError):
        tps_fast(parse_tree("a"), parse_tree("a"), s=80, word_bits=64)


def test_micro_size_one_rejected():
    p = parse_tree("a(b,c)")
    with pytest.raises(PatmatError):
        micro_decompose(p, 1)
    with pytest.raises(PatmatError):
        tps_fast(p, parse_tree("a(b)"), 1)
