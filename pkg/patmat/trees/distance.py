"""
Ordered tree edit distance and alignment distance
有序树编辑距离与对齐距离

Key behavioral rules:
- Costs come from a CostFunction; None stands for the blank symbol λ.
- UnitCost works in exact integers, TableCost in floats.
- edit_distance_oracle follows the rightmost-root forest recursion directly and
  is only meant for small inputs; zhang_shasha computes the same value over
  keyroot subproblems.
- alignment_distance is the forest dynamic program over sibling ranges.
"""
from __future__ import annotations

import itertools
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple, Union

from ..core.errors import NonMetricCostError
from .tree import LabeledTree

Number = Union[int, float]
Label = Optional[Hashable]

_EPS = 1e-9


class CostFunction:
    """cost(a, b) for labels or λ (None)."""

    def cost(self, a: Label, b: Label) -> Number:
        raise NotImplementedError

    def validate(self, alphabet: Iterable[Hashable]) -> None:
        """Check identity, symmetry and the triangle inequality over alphabet ∪ {λ}."""
        symbols: List[Label] = [None] + sorted(set(alphabet), key=repr)
        for a in symbols:
            if abs(self.cost(a, a)) > _EPS:
                raise NonMetricCostError(f"cost({a!r}, {a!r}) must be 0")
        for a, b in itertools.combinations(symbols, 2):
            ab, ba = self.cost(a, b), self.cost(b, a)
            if ab < 0 or abs(ab - ba) > _EPS:
                raise NonMetricCostError(f"cost({a!r}, {b!r}) is negative or asymmetric")
        for a, b, c in itertools.product(symbols, repeat=3):
            if self.cost(a, c) > self.cost(a, b) + self.cost(b, c) + _EPS:
                raise NonMetricCostError(f"triangle inequality fails for {a!r}, {b!r}, {c!r}")


class UnitCost(CostFunction):
    def cost(self, a: Label, b: Label) -> int:
        return 0 if a == b else 1

    def validate(self, alphabet: Iterable[Hashable]) -> None:
        return None


class TableCost(CostFunction):
    """Explicit cost table, looked up in either orientation."""

    def __init__(self, table: Dict[Tuple[Label, Label], float], default: Optional[float] = None):
        self.table = dict(table)
        self.default = default
        alphabet = {x for pair in self.table for x in pair if x is not None}
        self.validate(alphabet)

    def cost(self, a: Label, b: Label) -> float:
        if a == b:
            return 0.0
        if (a, b) in self.table:
            return float(self.table[(a, b)])
        if (b, a) in self.table:
            return float(self.table[(b, a)])
        if self.default is None:
            raise NonMetricCostError(f"no cost given for {a!r} / {b!r}")
        return float(self.default)

    @classmethod
    def from_file(cls, path: str, default: Optional[float] = None) -> "TableCost":
        """Lines `a b cost`; `-` is λ; `#` starts a comment line."""
        table: Dict[Tuple[Label, Label], float] = {}
        with open(path, "r", encoding="utf-8") as f:
            for lineno, line in enumerate(f, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split()
                if len(parts) != 3:
                    raise NonMetricCostError(f"{path}:{lineno}: expected 'a b cost'")
                a, b, value = parts
                try:
                    table[(None if a == "-" else a, None if b == "-" else b)] = float(value)
                except ValueError:
                    raise NonMetricCostError(f"{path}:{lineno}: bad cost {value!r}")
        return cls(table, default)


def _check_alphabet(c: CostFunction, t1: LabeledTree, t2: LabeledTree) -> None:
    c.validate(set(t1.labels) | set(t2.labels))


class _Post:
    """Postorder view: labels, leftmost-leaf index and keyroots (all 0-based)."""

    def __init__(self, t: LabeledTree):
        order = list(t.postorder())
        rank = {v: i for i, v in enumerate(order)}
        self.n = len(order)
        self.labels = [t.labels[v] for v in order]
        self.lml = [0] * self.n
        for i, v in enumerate(order):
            cs = t.children[v]
            self.lml[i] = self.lml[rank[cs[0]]] if cs else i
        seen: Dict[int, int] = {}
        for i in range(self.n):
            seen[self.lml[i]] = i
        self.keyroots = sorted(seen.values())


def edit_distance_oracle(t1: LabeledTree, t2: LabeledTree, c: Optional[CostFunction] = None) -> Number:
    """δ(t1, t2) by the rightmost-root forest recursion, memoized on postorder intervals."""
    c = c or UnitCost()
    _check_alphabet(c, t1, t2)
    a, b = _Post(t1), _Post(t2)
    memo: Dict[Tuple[int, int, int, int], Number] = {}

    def dist(i1: int, j1: int, i2: int, j2: int) -> Number:
        if i1 > j1 and i2 > j2:
            return 0
        key = (i1, j1, i2, j2)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if i1 > j1:
            val = sum(c.cost(None, b.labels[x]) for x in range(i2, j2 + 1))
        elif i2 > j2:
            val = sum(c.cost(a.labels[x], None) for x in range(i1, j1 + 1))
        else:
            l1, l2 = a.lml[j1], b.lml[j2]
            val = min(
                dist(i1, j1 - 1, i2, j2) + c.cost(a.labels[j1], None),
                dist(i1, j1, i2, j2 - 1) + c.cost(None, b.labels[j2]),
                dist(i1, l1 - 1, i2, l2 - 1) + dist(l1, j1 - 1, l2, j2 - 1)
                + c.cost(a.labels[j1], b.labels[j2]),
            )
        memo[key] = val
        return val

    return dist(0, a.n - 1, 0, b.n - 1)


def zhang_shasha(t1: LabeledTree, t2: LabeledTree, c: Optional[CostFunction] = None) -> Number:
    """δ(t1, t2) over keyroot pairs with a permanent tree table and temporary forest tables."""
    c = c or UnitCost()
    _check_alphabet(c, t1, t2)
    a, b = _Post(t1), _Post(t2)
    if a.n == 0 or b.n == 0:
        return (sum(c.cost(x, None) for x in a.labels)
                + sum(c.cost(None, y) for y in b.labels))

    td = [[0] * b.n for _ in range(a.n)]

    for i in a.keyroots:
        for j in b.keyroots:
            li, lj = a.lml[i], b.lml[j]
            rows, cols = i - li + 2, j - lj + 2
            fd = [[0] * cols for _ in range(rows)]
            for x in range(1, rows):
                fd[x][0] = fd[x - 1][0] + c.cost(a.labels[li + x - 1], None)
            for y in range(1, cols):
                fd[0][y] = fd[0][y - 1] + c.cost(None, b.labels[lj + y - 1])
            for x in range(1, rows):
                u = li + x - 1
                for y in range(1, cols):
                    w = lj + y - 1
                    delete = fd[x - 1][y] + c.cost(a.labels[u], None)
                    insert = fd[x][y - 1] + c.cost(None, b.labels[w])
                    if a.lml[u] == li and b.lml[w] == lj:
                        best = min(delete, insert, fd[x - 1][y - 1] + c.cost(a.labels[u], b.labels[w]))
                        fd[x][y] = best
                        td[u][w] = best
                    else:
                        fd[x][y] = min(delete, insert,
                                       fd[a.lml[u] - li][b.lml[w] - lj] + td[u][w])
    return td[a.n - 1][b.n - 1]


def alignment_distance(t1: LabeledTree, t2: LabeledTree, c: Optional[CostFunction] = None) -> Number:
    """α(t1, t2): the minimum cost alignment, by DP over sibling-range subforests.

    A forest is (parent, lo, hi): children[parent][lo:hi]; parent -1 means the
    one-element list holding the root.
    """
    c = c or UnitCost()
    _check_alphabet(c, t1, t2)
    trees = (t1, t2)

    def roots(side: int, p: int) -> Sequence[int]:
        t = trees[side]
        if p < 0:
            return [t.root] if t.root is not None else []
        return t.children[p]

    def blank_sums(t: LabeledTree, deleting: bool) -> List[Number]:
        out: List[Number] = [0] * t.size
        for v in t.postorder():
            own = c.cost(t.labels[v], None) if deleting else c.cost(None, t.labels[v])
            out[v] = own + sum(out[ch] for ch in t.children[v])
        return out

    del_sum = blank_sums(t1, True)
    ins_sum = blank_sums(t2, False)
    memo: Dict[Tuple[int, int, int, int, int, int], Number] = {}

    def align(p1: int, lo1: int, hi1: int, p2: int, lo2: int, hi2: int) -> Number:
        if lo1 >= hi1:
            r2 = roots(1, p2)
            return sum(ins_sum[r2[k]] for k in range(lo2, hi2))
        if lo2 >= hi2:
            r1 = roots(0, p1)
            return sum(del_sum[r1[k]] for k in range(lo1, hi1))
        key = (p1, lo1, hi1, p2, lo2, hi2)
        hit = memo.get(key)
        if hit is not None:
            return hit
        f = roots(0, p1)[hi1 - 1]
        g = roots(1, p2)[hi2 - 1]
        nf, ng = len(t1.children[f]), len(t2.children[g])
        best = (align(p1, lo1, hi1 - 1, p2, lo2, hi2 - 1)
                + c.cost(t1.labels[f], t2.labels[g])
                + align(f, 0, nf, g, 0, ng))
        # f aligned with a blank; its children absorb a suffix of G
        del_f = c.cost(t1.labels[f], None)
        for k in range(lo2, hi2 + 1):
            best = min(best, del_f + align(p1, lo1, hi1 - 1, p2, lo2, k) + align(f, 0, nf, p2, k, hi2))
        ins_g = c.cost(None, t2.labels[g])
        for k in range(lo1, hi1 + 1):
            best = min(best, ins_g + align(p1, lo1, k, p2, lo2, hi2 - 1) + align(p1, k, hi1, g, 0, ng))
        memo[key] = best
        return best

    return align(-1, 0, len(roots(0, -1)), -1, 0, len(roots(1, -1)))
