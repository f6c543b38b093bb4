import itertools
import random

from patmat.trees import (
    FlCounter,
    TreeIndex,
    deep,
    emb,
    fl,
    including_subtrees,
    km_oracle,
    mop,
    parse_tree,
)

from conftest import all_trees, brute_deep, random_tree

EMB_P = "a(b(a),a)"
EMB_T = "a(b(a),b(a,b(a)),a(a,b))"


def test_km_examples():
    assert km_oracle(parse_tree("f(b,e)"), parse_tree("f(d(a,c(b)),e)"))
    t = parse_tree("f(d(a,c(b)),e)")
    assert km_oracle(t, t)
    assert not km_oracle(parse_tree("a(b)"), parse_tree("b(a)"))


def test_emb_reference_instance():
    p, t = parse_tree(EMB_P), parse_tree(EMB_T)
    assert emb(p, t) == [t.root]
    assert including_subtrees(p, t) == [t.root]


def test_emb_steps_of_reference_instance():
    t = parse_tree(EMB_T)
    ix = TreeIndex(t)
    # a-labeled leaves and the a-labeled leaf below the second b
    leaves_a = fl(t.leaves(), "a", ix)
    assert leaves_a == [2, 4, 6, 8]
    # the middle child of the root (3) is not a deep occurrence of b(a)
    b_over_a = fl(deep([t.parent[v] for v in leaves_a], ix), "b", ix)
    assert b_over_a == [1, 5]


def test_emb_single_node_pattern():
    t = parse_tree("b(a(a),c,a)")
    ix = TreeIndex(t)
    got = emb(parse_tree("a"), t, ix)
    assert got == deep([v for v in ix.by_pre if t.labels[v] == "a"], ix)


def test_fl_examples():
    t = parse_tree("a(b(c),d)")
    ix = TreeIndex(t)
    assert fl([2], "c", ix) == [2]
    assert fl([2, 3], "z", ix) == []
    assert fl([2, 3], "a", ix) == [0]


def _walk_up_fl(t, v, alpha):
    while v is not None and t.labels[v] != alpha:
        v = t.parent[v]
    return v


def test_fl_against_walk_up():
    rng = random.Random(21)
    for _ in range(300):
        t = random_tree(rng, rng.randint(1, 25), "abc")
        ix = TreeIndex(t)
        xs = deep(sorted(rng.sample(range(t.size), rng.randint(1, t.size)), key=ix.pre.__getitem__), ix)
        alpha = rng.choice("abc")
        counter = FlCounter()
        got = fl(xs, alpha, ix, counter)
        found = [_walk_up_fl(t, v, alpha) for v in xs]
        assert sorted(got) == brute_deep(t, [v for v in found if v is not None])
        assert counter.per_call[0] <= 2 * t.size
        # each slot leaves the Next chain once and the list once
        assert counter.ops_per_call[0] <= 2 * len(xs)


def test_fl_link_updates_stay_linear():
    # 30 sibling leaves under a 51-node b-path: duplicates collapse, one entry climbs
    t = parse_tree("a(" + "b(" * 51 + ",".join(["c"] * 30) + ")" * 52)
    ix = TreeIndex(t)
    counter = FlCounter()
    assert fl(t.leaves(), "a", ix, counter) == [t.root]
    assert counter.ops_per_call[0] <= 2 * 30
    assert counter.per_call[0] <= 2 * t.size

    rng = random.Random(23)
    for _ in range(100):
        p = random_tree(rng, rng.randint(1, 5))
        t = random_tree(rng, rng.randint(1, 60))
        counter = FlCounter()
        emb(p, t, counter=counter)
        assert all(ops <= 2 * t.size for ops in counter.ops_per_call)
        assert counter.list_ops == sum(counter.ops_per_call)


def _brute_mop(y, x, ix):
    cands = [(p, xx) for p in y for xx in x if ix.left_of(p[1], xx)]
    out = set()
    for p, xx in cands:
        dominated = any(
            (q, xq) != (p, xx)
            and ix.left_of_eq(p[1], q[1])
            and ix.left_of_eq(xq, xx)
            for q, xq in cands
        )
        if not dominated:
            out.add((p[0], xx))
    return sorted(out, key=lambda pr: ix.pre[pr[1]])


def test_mop_examples():
    t = parse_tree("r(a,b,c,d)")
    ix = TreeIndex(t)
    assert mop([(1, 1), (2, 2)], [3, 4], ix) == [(2, 3)]
    assert mop([(1, 1)], [], ix) == []


def test_mop_against_phi_enumeration():
    rng = random.Random(33)
    checked = 0
    for _ in range(400):
        t = random_tree(rng, 15)
        ix = TreeIndex(t)

        def deep_sample():
            raw = rng.sample(range(t.size), rng.randint(1, 6))
            return deep(sorted(raw, key=ix.pre.__getitem__), ix)

        ys = deep_sample()
        y = [(rng.choice(range(t.size)), v) for v in ys]
        x = deep_sample()
        assert mop(y, x, ix) == _brute_mop(y, x, ix)
        checked += 1
    assert checked == 400


def test_emb_matches_km_exhaustively():
    patterns = all_trees(3)
    texts = all_trees(5)
    for p, t in itertools.product(patterns, texts):
        assert bool(emb(p, t)) == km_oracle(p, t), (p, t)


def test_emb_matches_km_random():
    rng = random.Random(44)
    for _ in range(400):
        p = random_tree(rng, rng.randint(1, 4))
        t = random_tree(rng, rng.randint(1, 8))
        assert bool(emb(p, t)) == km_oracle(p, t)


def test_emb_output_is_deep_and_including():
    rng = random.Random(55)
    for _ in range(200):
        p = random_tree(rng, rng.randint(1, 4))
        t = random_tree(rng, rng.randint(1, 14))
        ix = TreeIndex(t)
        got = emb(p, t, ix)
        assert deep(got, ix) == got
        for v in got:
            assert km_oracle(p, t.subtree(v))
            for c in t.children[v]:
                assert not km_oracle(p, t.subtree(c)) or any(ix.is_ancestor(c, w) for w in got)


def test_including_subtrees_against_km():
    rng = random.Random(66)
    for _ in range(200):
        p = random_tree(rng, rng.randint(1, 4))
        t = random_tree(rng, rng.randint(1, 12))
        want = [u for u in range(t.size) if km_oracle(p, t.subtree(u))]
        assert including_subtrees(p, t) == want


def test_including_subtrees_leaf_occurrence():
    t = parse_tree("x(y(z(q)),w)")
    assert including_subtrees(parse_tree("q"), t) == [0, 1, 2, 3]
