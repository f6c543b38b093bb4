import itertools
import random

import pytest

from patmat.core.errors import NonMetricCostError
from patmat.trees import (
    LabeledTree,
    TableCost,
    UnitCost,
    alignment_distance,
    edit_distance_oracle,
    parse_tree,
    zhang_shasha,
)

from conftest import all_trees, random_tree

EMPTY = LabeledTree([], [])


def test_identity_and_insertions():
    t = parse_tree("f(d(a,c(b)),e)")
    assert edit_distance_oracle(t, t) == 0
    assert zhang_shasha(t, t) == 0
    assert edit_distance_oracle(EMPTY, parse_tree("a(b,c)")) == 3
    assert zhang_shasha(EMPTY, parse_tree("a(b,c)")) == 3
    assert zhang_shasha(parse_tree("a"), parse_tree("b")) == 1


def test_edit_example_at_most_four():
    t1 = parse_tree("f(d(a,c(b)),e)")
    t2 = parse_tree("a(c(d(a,b)),d)")
    value = edit_distance_oracle(t1, t2)
    assert value <= 4
    assert zhang_shasha(t1, t2) == value


def test_alignment_example():
    t1 = parse_tree("a(e(b,c),d)")
    t2 = parse_tree("a(b,f(c,d))")
    alpha = alignment_distance(t1, t2, UnitCost())
    delta = zhang_shasha(t1, t2, UnitCost())
    assert alpha == 4
    assert delta == 2
    assert delta <= alpha


def test_alignment_breaks_triangle_inequality():
    t1 = parse_tree("a(e(b,c),d)")
    t2 = parse_tree("a(b,f(c,d))")
    t3 = parse_tree("a(b,c,d)")
    assert alignment_distance(t1, t3) + alignment_distance(t3, t2) == 2
    assert alignment_distance(t1, t2) == 4


def test_alignment_identity():
    t = parse_tree("x(y(z),w)")
    assert alignment_distance(t, t) == 0


def test_zhang_shasha_matches_oracle_exhaustively():
    trees = all_trees(4)
    for t1, t2 in itertools.product(trees, repeat=2):
        assert zhang_shasha(t1, t2) == edit_distance_oracle(t1, t2)


@pytest.mark.slow
def test_zhang_shasha_matches_oracle_random():
    rng = random.Random(3)
    for _ in range(500):
        t1 = random_tree(rng, rng.randint(1, 12), "abc")
        t2 = random_tree(rng, rng.randint(1, 12), "abc")
        assert zhang_shasha(t1, t2) == edit_distance_oracle(t1, t2)


def test_unit_edit_distance_is_a_metric():
    rng = random.Random(5)
    for _ in range(60):
        a, b, c = (random_tree(rng, rng.randint(1, 7)) for _ in range(3))
        ab, ba = zhang_shasha(a, b), zhang_shasha(b, a)
        assert ab == ba
        assert zhang_shasha(a, c) <= ab + zhang_shasha(b, c)
        assert (ab == 0) == (a == b)


def test_edit_never_exceeds_alignment():
    rng = random.Random(9)
    for _ in range(150):
        t1 = random_tree(rng, rng.randint(1, 8))
        t2 = random_tree(rng, rng.randint(1, 8))
        assert zhang_shasha(t1, t2) <= alignment_distance(t1, t2)


def test_table_costs(tmp_path):
    path = tmp_path / "costs.txt"
    path.write_text("# relabel is cheap\na b 0.5\na - 1\nb - 1\n", encoding="utf-8")
    c = TableCost.from_file(str(path))
    assert zhang_shasha(parse_tree("a"), parse_tree("b"), c) == pytest.approx(0.5)
    assert edit_distance_oracle(parse_tree("a(b)"), parse_tree("b"), c) == pytest.approx(1.0)


def test_non_metric_costs_rejected():
    with pytest.raises(NonMetricCostError):
        TableCost({("a", "b"): 5.0, ("a", None): 1.0, ("b", None): 1.0})
    with pytest.raises(NonMetricCostError):
        TableCost({("a", "b"): -1.0})


def test_missing_cost_rejected():
    c = TableCost({("a", None): 1.0, ("b", None): 1.0, ("a", "b"): 1.0})
    with pytest.raises(NonMetricCostError):
        zhang_shasha(parse_tree("a"), parse_tree("z"), c)
