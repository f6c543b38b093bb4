"""
Approximate regular expression matching
近似正则表达式匹配

Δ(v, i) is the least edit distance between Q[1..i] (whole mode) or some
suffix-window of it (substring mode) and a string spelled on a path θ → v.
Row i is computed in two passes over the states in topological order: the
first follows forward transitions, the second lets values cross one back
transition and flow forward again. Values saturate at d+1.

Rows are evaluated per subautomaton of a nested decomposition. The states of a
subautomaton are cut into chunks at its pseudo-transitions; a chunk's output
depends only on its inputs, so chunk results are memoized (keyed by shape) when
the number of possible inputs, (d+2)^z, fits the budget.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

from ..core.errors import PatmatError
from .core import RegexAst, Tnfa, parse_regex, thompson
from .engines import NestedDecomposition, Subautomaton, nested_decompose


@dataclass
class ApproxStats:
    memo_hits: int = 0
    direct_chunks: int = 0
    memo_entries: int = 0


@dataclass
class ApproxResult:
    positions: List[int] = field(default_factory=list)
    distance: int = 0  # Δ₂(φ, n), capped at d+1
    accepted: bool = False


@dataclass
class _Chunk:
    states: List[int]
    prev_needed: List[int]  # states whose previous-row value is read
    ext1: List[int]  # outside states whose pass-1 value is read
    need1: List[int]  # states whose pass-1 value is read in pass 2
    ext2: List[int]  # outside states whose pass-2 value is read
    sigma: List[int]  # Σ-states, in order, for the equality mask
    memo1: bool
    memo2: bool


class _Plan:
    """Chunk layout of one subautomaton."""

    def __init__(self, part: Subautomaton, width: int, budget: int):
        t = part.tnfa
        self.part = part
        self.tnfa = t
        self.shape = t.shape_key()
        starts = [1] + [fp + 1 for _, fp in part.pseudo]
        ends = [tp for tp, _ in part.pseudo] + [t.size - 1]
        self.chunks: List[_Chunk] = []
        for lo, hi in zip(starts, ends):
            states = list(range(lo, hi + 1))
            inside = set(states)
            prev_needed, ext1, need1, ext2, sigma = set(), set(), set(states), set(), []
            for v in states:
                if t.label[v] is not None:
                    sigma.append(v)
                    prev_needed.update((v, v - 1))
                    if v - 1 not in inside:
                        ext1.add(v - 1)
                        ext2.add(v - 1)
                    continue
                for u in t.eps_in[v]:
                    if u < v:
                        if u not in inside:
                            ext1.add(u)
                            ext2.add(u)
                    else:
                        need1.add(u)
            z1 = len(prev_needed) + len(ext1)
            z2 = len(need1) + len(ext2)
            self.chunks.append(_Chunk(
                states, sorted(prev_needed), sorted(ext1), sorted(need1), sorted(ext2),
                sigma, width ** z1 <= budget, width ** z2 <= budget))


class _RowEngine:
    def __init__(self, d: NestedDecomposition, dist: int, budget: int, stats: ApproxStats):
        self.parts = d.parts
        self.cap = dist + 1
        self.stats = stats
        self.plans = [_Plan(p, dist + 2, budget) for p in d.parts]
        self.memo: Dict[tuple, Tuple[int, ...]] = {}
        self.prev: List[List[int]] = [[0] * p.tnfa.size for p in d.parts]
        self.cur1: List[List[int]] = [[0] * p.tnfa.size for p in d.parts]
        self.cur2: List[List[int]] = [[0] * p.tnfa.size for p in d.parts]
        self.global_map = [d.local_to_global(i) for i in range(len(d.parts))]
        self.tnfa = d.tnfa

    def first_row(self) -> None:
        """Row 0 on the full automaton: forward transitions only, θ = 0."""
        t = self.tnfa
        row = [0] * t.size
        for v in range(1, t.size):
            if t.label[v] is not None:
                row[v] = min(row[v - 1] + 1, self.cap)
            else:
                row[v] = min((row[u] for u in t.eps_in[v] if u < v), default=self.cap)
        for i, mapping in enumerate(self.global_map):
            self.prev[i] = [row[mapping[s]] for s in range(self.parts[i].tnfa.size)]

    # pass 1

    def _chunk1(self, plan: _Plan, j: int, i: int, a: int) -> None:
        ch = plan.chunks[j]
        t = plan.tnfa
        prev, cur = self.prev[i], self.cur1[i]
        eq = 0
        for bit, v in enumerate(ch.sigma):
            if t.label[v] == a:
                eq |= 1 << bit
        key = None
        if ch.memo1:
            key = (plan.shape, j, 1, eq, tuple(prev[u] for u in ch.prev_needed),
                   tuple(cur[u] for u in ch.ext1))
            hit = self.memo.get(key)
            if hit is not None:
                self.stats.memo_hits += 1
                for v, val in zip(ch.states, hit):
                    cur[v] = val
                return
        self.stats.direct_chunks += 1
        cap = self.cap
        for v in ch.states:
            lab = t.label[v]
            if lab is not None:
                cur[v] = min(prev[v] + 1, prev[v - 1] + (0 if lab == a else 1), cur[v - 1] + 1, cap)
            else:
                cur[v] = min((cur[u] for u in t.eps_in[v] if u < v), default=cap)
        if key is not None:
            self.memo[key] = tuple(cur[v] for v in ch.states)
            self.stats.memo_entries = len(self.memo)

    def next1(self, i: int, b: int, a: int) -> None:
        plan = self.plans[i]
        part = self.parts[i]
        cur = self.cur1[i]
        cur[0] = b
        for j in range(len(plan.chunks)):
            self._chunk1(plan, j, i, a)
            if j < len(part.children):
                c = part.children[j]
                tp, fp = part.pseudo[j]
                self.next1(c, cur[tp], a)
                cur[fp] = self.cur1[c][self.parts[c].tnfa.phi]

    # pass 2

    def _chunk2(self, plan: _Plan, j: int, i: int) -> None:
        ch = plan.chunks[j]
        t = plan.tnfa
        one, two = self.cur1[i], self.cur2[i]
        key = None
        if ch.memo2:
            key = (plan.shape, j, 2, tuple(one[u] for u in ch.need1), tuple(two[u] for u in ch.ext2))
            hit = self.memo.get(key)
            if hit is not None:
                self.stats.memo_hits += 1
                for v, val in zip(ch.states, hit):
                    two[v] = val
                return
        self.stats.direct_chunks += 1
        for v in ch.states:
            if t.label[v] is not None:
                two[v] = min(one[v], two[v - 1] + 1, self.cap)
                continue
            best = one[v]
            for u in t.eps_in[v]:
                best = min(best, two[u] if u < v else one[u])
            two[v] = best
        if key is not None:
            self.memo[key] = tuple(two[v] for v in ch.states)
            self.stats.memo_entries = len(self.memo)

    def next2(self, i: int, b: int) -> None:
        plan = self.plans[i]
        part = self.parts[i]
        two = self.cur2[i]
        two[0] = b
        for j in range(len(plan.chunks)):
            self._chunk2(plan, j, i)
            if j < len(part.children):
                c = part.children[j]
                tp, fp = part.pseudo[j]
                self.next2(c, two[tp])
                two[fp] = self.cur2[c][self.parts[c].tnfa.phi]

    def row(self, theta_value: int, a: int) -> int:
        self.next1(0, theta_value, a)
        self.next2(0, theta_value)
        self.prev, self.cur2 = self.cur2, self.prev
        return self.prev[0][self.parts[0].tnfa.phi]

    def accept_value(self) -> int:
        return self.prev[0][self.parts[0].tnfa.phi]


def approx_regex(r: Union[str, bytes, RegexAst, Tnfa], q: Union[str, bytes], d: int,
                 mode: str = "substring", x: Optional[int] = None, budget: int = 65536,
                 stats: Optional[ApproxStats] = None) -> ApproxResult:
    """
    Positions within distance d of L(R), or whole-string acceptance.
    误差 d 内的近似正则匹配

    Args:
        mode: "substring" reports every j in 0..n with Δ₂(φ, j) ≤ d (θ row
              held at 0); "whole" holds θ at i and only the last row counts
        x: state cap of the subautomata (None: one subautomaton)
        budget: maximum (d+2)^z for which a chunk is memoized
    """
    if d < 0:
        raise PatmatError(f"error bound must be >= 0, got {d}")
    if mode not in ("substring", "whole"):
        raise PatmatError(f"unknown mode {mode!r}")
    if isinstance(q, str):
        q = q.encode("utf-8")
    if isinstance(r, Tnfa):
        tnfa = r
    else:
        tnfa = thompson(r if isinstance(r, RegexAst) else parse_regex(r))
    decomposition = nested_decompose(tnfa, x if x is not None else max(tnfa.size, 2))
    stats = stats if stats is not None else ApproxStats()
    engine = _RowEngine(decomposition, d, budget, stats)
    engine.first_row()
    out = ApproxResult()
    value = engine.accept_value()
    if mode == "substring" and value <= d:
        out.positions.append(0)
    cap = d + 1
    for i, a in enumerate(q, 1):
        theta = min(i, cap) if mode == "whole" else 0
        value = engine.row(theta, a)
        if mode == "substring" and value <= d:
            out.positions.append(i)
    out.distance = value
    out.accepted = value <= d
    return out
