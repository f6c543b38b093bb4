"""
Accelerated regex simulation
加速的正则表达式模拟

A simulation data structure answers Move, Close, Member and Insert for one
(sub)automaton. Four are provided:

- ClassicDS: breadth-first search, bit i = state i.
- SimpleDS: constant number of bit-string operations for automata with m(m+1)
  bits in a word. State r sits at bit m-1-r.
- SeparatorDS: separator tree over the parse-tree cluster; Close takes one pass
  per tree level.
- FrDS: Succ and Close tables over all masks, shared between subautomata of the
  same label-stripped shape.

The nested decomposition cuts the parse tree into clusters of at most x/2 nodes
(β pseudo-leaves included), so every subautomaton has at most x states. A step
is one Move_AS followed by two Close_AS passes from the root.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Set, Tuple, Union

from ..core.config import PatmatConfig
from ..core.errors import BudgetExceeded, PatmatError
from .bitstring import mul_structured, ones, repeat_bits
from .core import (
    RegexAst,
    Tnfa,
    build_tnfa,
    find_matches,
    parse_regex,
    thompson,
)

Notice = Callable[[str], None]


def _no_notice(message: str) -> None:
    pass


class SimulationDS:
    """Move/Close/Member/Insert over one automaton, in the structure's own bit layout."""

    name = "base"

    def __init__(self, tnfa: Tnfa):
        self.tnfa = tnfa
        self.size = tnfa.size
        self.theta = tnfa.theta
        self.phi = tnfa.phi
        self.pos: List[int] = list(range(tnfa.size))
        self.fallback = False

    def encode(self, states: Iterable[int]) -> int:
        out = 0
        for s in states:
            out |= 1 << self.pos[s]
        return out

    def decode(self, mask: int) -> Set[int]:
        return {s for s in range(self.size) if mask >> self.pos[s] & 1}

    def member(self, mask: int, s: int) -> bool:
        return bool(mask >> self.pos[s] & 1)

    def insert(self, mask: int, s: int) -> int:
        return mask | 1 << self.pos[s]

    def move(self, mask: int, a: int) -> int:
        raise NotImplementedError

    def close(self, mask: int) -> int:
        raise NotImplementedError


class ClassicDS(SimulationDS):
    name = "classic"

    def move(self, mask: int, a: int) -> int:
        return self.tnfa.move(mask, a)

    def close(self, mask: int) -> int:
        return self.tnfa.close(mask)


def _reach_from(tnfa: Tnfa) -> List[int]:
    """Reflexive ε-reachability, as a standard-layout mask per source state."""
    return [tnfa.close(1 << s) for s in range(tnfa.size)]


class SimpleDS(SimulationDS):
    """
    Constant-operation bit-parallel structure
    常数次位运算的模拟结构

    Close(S):
        Y = (S × X) & E
        Z = ((Y | I) − (I >> m)) & I
        S' = ((Z × C) >> m²) & (2^m − 1)
    with X = 1(0^m 1)^{m−1}, I = (10^m)^m, C = 1(0^{m−1}1)^{m−1}. Block i of E
    (width m+1) lists the sources that reach state m−1−i.
    """

    name = "simple"

    def __init__(self, tnfa: Tnfa):
        super().__init__(tnfa)
        m = self.size
        self.m = m
        self.pos = [m - 1 - s for s in range(m)]
        self.d: Dict[int, int] = {}
        for v, lab in enumerate(tnfa.label):
            if lab is not None:
                self.d[lab] = self.d.get(lab, 0) | 1 << self.pos[v]
        e = 0
        for r, reach in enumerate(_reach_from(tnfa)):
            for s in tnfa.states(reach):
                e |= 1 << ((m - 1 - s) * (m + 1) + m - 1 - r)
        self.e = e
        self.i_const = repeat_bits(m + 1, m, offset=m)
        self.width = m * (m + 1)

    def move(self, mask: int, a: int) -> int:
        return (mask >> 1) & self.d.get(a, 0)

    def close(self, mask: int) -> int:
        m = self.m
        y = mul_structured(mask, m + 1, m) & self.e
        z = ((y | self.i_const) - (self.i_const >> m)) & self.i_const
        return (mul_structured(z, m, m) >> (m * m)) & ones(m)


@dataclass
class SeparatorNode:
    nodes: List[int]
    depth: int
    states: int
    separator: Optional[int] = None  # root parse node of the inner part
    outer: Optional["SeparatorNode"] = None
    inner: Optional["SeparatorNode"] = None

    @property
    def is_leaf(self) -> bool:
        return self.separator is None


def _split(tnfa: Tnfa, root: int, members: Set[int]) -> Tuple[int, Set[int]]:
    """Edge (parent, c) minimising the larger side; ties go to the heavier child."""
    order: List[int] = []
    stack = [root]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(c for c in tnfa.node_children(v) if c in members)
    size: Dict[int, int] = {}
    for v in reversed(order):
        size[v] = 1 + sum(size[c] for c in tnfa.node_children(v) if c in members)
    t = len(members)
    rank = {v: i for i, v in enumerate(order)}
    best = min((v for v in order if v != root),
               key=lambda v: (max(size[v], t - size[v]), -size[v], rank[v]))
    inner: Set[int] = set()
    stack = [best]
    while stack:
        v = stack.pop()
        inner.add(v)
        stack.extend(c for c in tnfa.node_children(v) if c in members)
    return best, inner


class SeparatorDS(SimulationDS):
    """
    Separator-tree closure structure
    分隔树 ε-闭包结构

    Every separator-tree node at depth k owns an interval of length 3·2^(d−k)
    of [1, l], l = 3·2^d. A leaf (one parse node v) puts θ_v at its second
    position and φ_v at its third; position p is bit l − p. Level k closes S
    under paths through the separator states {θ_c, φ_c} of each depth-k node.
    """

    name = "separator"

    def __init__(self, tnfa: Tnfa, notice: Notice = _no_notice):
        super().__init__(tnfa)
        self.notice = notice
        self.tree = self._build_tree()
        self.depth = max(n.depth for n in self._walk())
        self.length = 3 * (1 << self.depth)
        self._assign_positions()
        self._build_levels()
        self._build_move()

    def _build_tree(self) -> SeparatorNode:
        t = self.tnfa
        root = SeparatorNode(t.nodes, 0, 2 * len(t.nodes))
        work = [(root, t.root_node)]
        while work:
            bn, top = work.pop()
            members = set(bn.nodes)
            if len(members) == 1:
                continue
            sep, inner = _split(t, top, members)
            outer_nodes = [v for v in bn.nodes if v not in inner]
            inner_nodes = [v for v in bn.nodes if v in inner]
            bn.separator = sep
            bn.outer = SeparatorNode(outer_nodes, bn.depth + 1, 2 * len(outer_nodes))
            bn.inner = SeparatorNode(inner_nodes, bn.depth + 1, 2 * len(inner_nodes))
            work.append((bn.outer, top))
            work.append((bn.inner, sep))
        return root

    def _walk(self) -> Iterable[SeparatorNode]:
        stack = [self.tree]
        while stack:
            bn = stack.pop()
            yield bn
            if not bn.is_leaf:
                stack.extend((bn.inner, bn.outer))

    def _assign_positions(self) -> None:
        self.start: Dict[int, int] = {}  # id(SeparatorNode) -> first position
        stack = [(self.tree, 1)]
        while stack:
            bn, a = stack.pop()
            self.start[id(bn)] = a
            if bn.is_leaf:
                (v,) = bn.nodes
                th, ph = self.tnfa.node_states[v]
                self.pos[th] = self.length - (a + 1)
                self.pos[ph] = self.length - (a + 2)
                continue
            half = (self.length >> bn.depth) // 2
            stack.append((bn.outer, a))
            stack.append((bn.inner, a + half))

    def _reach(self, states: Set[int], source: int, forward: bool) -> Set[int]:
        adj = self.tnfa.eps_out if forward else self.tnfa.eps_in
        seen = {source}
        stack = [source]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v in states and v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen

    def _build_levels(self) -> None:
        d = self.depth
        self.x_theta = [0] * d
        self.e_theta = [0] * d
        self.x_phi = [0] * d
        self.e_phi = [0] * d
        self.i_level = [0] * d
        self.leaf_eps = 0
        for bn in self._walk():
            a = self.start[id(bn)]
            if bn.is_leaf:
                (v,) = bn.nodes
                th, ph = self.tnfa.node_states[v]
                if ph in self.tnfa.eps_out[th]:
                    self.leaf_eps |= 1 << self.pos[th]
                if bn.depth < d:
                    self.i_level[bn.depth] |= 1 << (self.length - a)
                continue
            k = bn.depth
            self.i_level[k] |= 1 << (self.length - a)
            states: Set[int] = set()
            for v in bn.nodes:
                states.update(self.tnfa.node_states[v])
            th, ph = self.tnfa.node_states[bn.separator]
            self.x_theta[k] |= self.encode(self._reach(states, th, forward=False))
            self.e_theta[k] |= self.encode(self._reach(states, th, forward=True))
            self.x_phi[k] |= self.encode(self._reach(states, ph, forward=False))
            self.e_phi[k] |= self.encode(self._reach(states, ph, forward=True))

    def _build_move(self) -> None:
        self.d: Dict[int, int] = {}
        self.scatter: Dict[int, List[Tuple[int, int]]] = {}
        adjacent = True
        for v, lab in enumerate(self.tnfa.label):
            if lab is None:
                continue
            src, dst = self.pos[v - 1], self.pos[v]
            adjacent &= src == dst + 1
            self.d[lab] = self.d.get(lab, 0) | 1 << dst
            self.scatter.setdefault(lab, []).append((src, dst))
        self.fallback = not adjacent
        if self.fallback:
            self.notice("separator mapping breaks α-adjacency; Move uses scatter masks")

    def move(self, mask: int, a: int) -> int:
        if not self.fallback:
            return (mask >> 1) & self.d.get(a, 0)
        out = 0
        for src, dst in self.scatter.get(a, ()):
            if mask >> src & 1:
                out |= 1 << dst
        return out

    def close(self, mask: int) -> int:
        s = mask
        for k in range(self.depth):
            t = (self.length >> k) - 1
            i_k = self.i_level[k]
            grown = 0
            for xk, ek in ((self.x_theta[k], self.e_theta[k]), (self.x_phi[k], self.e_phi[k])):
                y = s & xk
                z = ((y | i_k) - (i_k >> t)) & i_k
                f = z - (z >> t)
                grown |= f & ek
            s |= grown
        return s | (s & self.leaf_eps) >> 1

    def audit_depths(self) -> List[Tuple[int, int]]:
        """(depth, state count) of every separator-tree node."""
        return [(bn.depth, bn.states) for bn in self._walk()]


class FRTableCache:
    """Succ/Close tables keyed by label-stripped shape."""

    def __init__(self, budget: int = 65536):
        self.budget = budget
        self.tables: Dict[str, Tuple[List[int], List[int]]] = {}

    def get(self, tnfa: Tnfa) -> Tuple[List[int], List[int]]:
        key = tnfa.shape_key()
        if key in self.tables:
            return self.tables[key]
        if (1 << tnfa.size) > self.budget:
            raise BudgetExceeded(f"2^{tnfa.size} table entries exceed budget {self.budget}")
        succ_one = [0] * tnfa.size
        for v, lab in enumerate(tnfa.label):
            if lab is not None:
                succ_one[v - 1] |= 1 << v
        close_one = _reach_from(tnfa)
        full = 1 << tnfa.size
        succ = [0] * full
        close = [0] * full
        for mask in range(1, full):
            low = mask & -mask
            i = low.bit_length() - 1
            succ[mask] = succ[mask ^ low] | succ_one[i]
            close[mask] = close[mask ^ low] | close_one[i]
        self.tables[key] = (succ, close)
        return self.tables[key]


class FrDS(SimulationDS):
    """Four-Russians structure: Move = Succ[S] & Eq[a], Close = Close[S]."""

    name = "fr"

    def __init__(self, tnfa: Tnfa, cache: Optional[FRTableCache] = None,
                 notice: Notice = _no_notice):
        super().__init__(tnfa)
        cache = cache if cache is not None else FRTableCache()
        self.eq: Dict[int, int] = {}
        for lab, vs in tnfa.by_symbol.items():
            for v in vs:
                self.eq[lab] = self.eq.get(lab, 0) | 1 << v
        try:
            self.tables: Optional[Tuple[List[int], List[int]]] = cache.get(tnfa)
        except BudgetExceeded as e:
            self.tables = None
            self.fallback = True
            notice(f"Four-Russians tables skipped ({e}); using breadth-first search")

    def move(self, mask: int, a: int) -> int:
        if self.tables is None:
            return self.tnfa.move(mask, a)
        return self.tables[0][mask] & self.eq.get(a, 0)

    def close(self, mask: int) -> int:
        if self.tables is None:
            return self.tnfa.close(mask)
        return self.tables[1][mask]


@dataclass
class Subautomaton:
    index: int
    root: int  # parse node
    tnfa: Tnfa
    parent: Optional[int] = None
    children: List[int] = field(default_factory=list)  # topological order of start states
    pseudo: List[Tuple[int, int]] = field(default_factory=list)  # local (θ_p, φ_p) per child
    ds: Optional[SimulationDS] = None


@dataclass
class NestedDecomposition:
    tnfa: Tnfa
    x: int
    parts: List[Subautomaton]

    def __len__(self) -> int:
        return len(self.parts)

    def local_to_global(self, i: int) -> Dict[int, int]:
        """Local state -> state of the full automaton (pseudo states map to the child's θ/φ)."""
        part = self.parts[i]
        out: Dict[int, int] = {}
        for v, (th, ph) in part.tnfa.node_states.items():
            gth, gph = self.tnfa.node_states[v]
            out[th] = gth
            out[ph] = gph
        return out


def _as_tnfa(source: Union[Tnfa, RegexAst, str, bytes]) -> Tnfa:
    if isinstance(source, Tnfa):
        return source
    if isinstance(source, RegexAst):
        return thompson(source)
    return thompson(parse_regex(source))


def nested_decompose(n: Union[Tnfa, RegexAst, str, bytes], x: int) -> NestedDecomposition:
    """
    Cut the automaton into subautomata of at most x states.
    将自动机切分为至多 x 个状态的子自动机

    Bottom-up over the parse tree, each node merges its children's open
    clusters; while the weight (nodes plus β pseudo-leaves) exceeds x // 2 the
    heaviest merged child is closed and becomes a pseudo-leaf of weight 1.
    A subautomaton has exactly twice its weight in states, so a union or
    concatenation (weight 3 at least) needs x >= 6; smaller x raises
    PatmatError for expressions that contain one.
    """
    if x < 2:
        raise PatmatError(f"cluster size must be >= 2, got {x}")
    tnfa = _as_tnfa(n)
    pt = tnfa.parse_tree
    cap = x // 2
    order: List[int] = []
    stack = [tnfa.root_node]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(pt.children[v])
    weight: Dict[int, int] = {}
    closed: Set[int] = {tnfa.root_node}
    for v in reversed(order):
        merged = list(pt.children[v])
        w = 1 + sum(weight[c] for c in merged)
        while w > cap and merged:
            c = max(merged, key=lambda u: weight[u])
            if weight[c] <= 1:
                break
            merged.remove(c)
            closed.add(c)
            w -= weight[c] - 1
        weight[v] = w

    worst = max(weight[r] for r in closed)
    if 2 * worst > x:
        raise PatmatError(f"cluster size {x} too small for this expression: "
                          f"a subautomaton needs {2 * worst} states")
    roots = sorted(closed, key=lambda v: tnfa.node_states[v][0])
    index = {r: i for i, r in enumerate(roots)}
    parts: List[Subautomaton] = []
    for i, r in enumerate(roots):
        cut: List[int] = []
        stack = [r]
        while stack:
            v = stack.pop()
            for c in pt.children[v]:
                if c in closed:
                    cut.append(c)
                else:
                    stack.append(c)
        local = build_tnfa(pt, r, cut)
        cut.sort(key=lambda v: local.node_states[v][0])
        part = Subautomaton(i, r, local)
        part.children = [index[c] for c in cut]
        part.pseudo = [local.node_states[c] for c in cut]
        parts.append(part)
    for part in parts:
        for c in part.children:
            parts[c].parent = part.index
    return NestedDecomposition(tnfa, x, parts)


class NestedSimulator:
    """State-set array X over a decomposition whose parts carry a data structure."""

    def __init__(self, d: NestedDecomposition):
        if any(p.ds is None for p in d.parts):
            raise PatmatError("every subautomaton needs a simulation data structure")
        self.d = d
        self.parts = d.parts

    def empty(self) -> List[int]:
        return [0] * len(self.parts)

    def initial(self) -> List[int]:
        root = self.parts[0]
        x = self.empty()
        x[0] = root.ds.insert(0, root.ds.theta)
        self.close_as(x)
        self.close_as(x)
        return x

    def move_as(self, x: List[int], a: int) -> None:
        for i, part in enumerate(self.parts):
            x[i] = part.ds.move(x[i], a)
        for i in range(len(self.parts) - 1, 0, -1):
            part = self.parts[i]
            if part.ds.member(x[i], part.ds.phi):
                parent = self.parts[part.parent]
                _, fp = parent.pseudo[parent.children.index(i)]
                x[parent.index] = parent.ds.insert(x[parent.index], fp)

    def close_as(self, x: List[int]) -> None:
        parts = self.parts
        x[0] = parts[0].ds.close(x[0])
        stack = [[0, 0]]
        while stack:
            frame = stack[-1]
            i, k = frame
            part = parts[i]
            if k < len(part.children):
                c = part.children[k]
                frame[1] += 1
                tp, _ = part.pseudo[k]
                child = parts[c]
                if part.ds.member(x[i], tp):
                    x[c] = child.ds.insert(x[c], child.ds.theta)
                x[c] = child.ds.close(x[c])
                stack.append([c, 0])
                continue
            stack.pop()
            if not stack:
                break
            p = stack[-1][0]
            parent = parts[p]
            _, fp = parent.pseudo[stack[-1][1] - 1]
            if part.ds.member(x[i], part.ds.phi):
                x[p] = parent.ds.insert(x[p], fp)
                x[p] = parent.ds.close(x[p])

    def step(self, x: List[int], a: int, x0: List[int]) -> List[int]:
        nxt = [u | v for u, v in zip(x, x0)]
        self.move_as(nxt, a)
        self.close_as(nxt)
        self.close_as(nxt)
        return nxt

    def accepts(self, x: List[int]) -> bool:
        root = self.parts[0]
        return root.ds.member(x[0], root.ds.phi)


def run_decomposed(d: NestedDecomposition, q: Union[str, bytes], allow_empty: bool = True) -> List[int]:
    """Match end positions, same convention as find_matches."""
    if isinstance(q, str):
        q = q.encode("utf-8")
    sim = NestedSimulator(d)
    x0 = sim.initial()
    empty_ok = allow_empty and sim.accepts(x0)
    out = [0] if empty_ok else []
    x = sim.empty()
    for j, a in enumerate(q, 1):
        x = sim.step(x, a, x0)
        if empty_ok or sim.accepts(x):
            out.append(j)
    return out


def build_simple_ds(a: Tnfa) -> SimpleDS:
    return SimpleDS(a)


def build_separator_ds(a: Tnfa, notice: Notice = _no_notice) -> SeparatorDS:
    return SeparatorDS(a, notice)


def build_fr_ds(a: Tnfa, budget: int = 65536, cache: Optional[FRTableCache] = None,
                notice: Notice = _no_notice) -> FrDS:
    return FrDS(a, cache if cache is not None else FRTableCache(budget), notice)


@dataclass(frozen=True)
class EngineChoice:
    kind: str
    reason: str


ENGINE_KINDS = ("classic", "simple", "separator", "fr", "nested")


def select_engine(m: int, w: int = 64, mode: str = "auto") -> EngineChoice:
    """
    Pick an engine for an automaton with m states on a w-bit word.
    按状态数与字长选择引擎

    auto: m ≤ √w -> simple, m ≤ w -> separator, otherwise nested decomposition
    over separator-backed subautomata. "bitpar" is auto without the classic option.
    """
    if mode in ENGINE_KINDS:
        return EngineChoice(mode, "requested")
    if mode not in ("auto", "bitpar"):
        raise PatmatError(f"unknown engine {mode!r}; choose from auto, bitpar, {', '.join(ENGINE_KINDS)}")
    if m * m <= w:
        return EngineChoice("simple", f"m={m} <= sqrt(w={w})")
    if m <= w:
        return EngineChoice("separator", f"sqrt(w={w}) < m={m} <= w")
    return EngineChoice("nested", f"m={m} > w={w}")


class Engine:
    """A compiled pattern that reports match end positions."""

    def __init__(self, tnfa: Tnfa, kind: str, reason: str = ""):
        self.tnfa = tnfa
        self.name = kind
        self.reason = reason
        self.fallback = False

    def find_matches(self, q: Union[str, bytes], allow_empty: bool = True) -> List[int]:
        return find_matches(self.tnfa, q, allow_empty)


class DecomposedEngine(Engine):
    def __init__(self, tnfa: Tnfa, kind: str, x: int,
                 factory: Callable[[Tnfa], SimulationDS], reason: str = ""):
        super().__init__(tnfa, kind, reason)
        self.decomposition = nested_decompose(tnfa, x)
        for part in self.decomposition.parts:
            part.ds = factory(part.tnfa)
        self.fallback = any(p.ds.fallback for p in self.decomposition.parts)

    def find_matches(self, q: Union[str, bytes], allow_empty: bool = True) -> List[int]:
        return run_decomposed(self.decomposition, q, allow_empty)


def build_engine(pattern: Union[Tnfa, RegexAst, str, bytes], mode: str = "auto",
                 config: Optional[PatmatConfig] = None, notice: Notice = _no_notice) -> Engine:
    """
    Compile a pattern for the requested (or automatically chosen) engine.
    为指定引擎编译模式
    """
    config = config or PatmatConfig()
    tnfa = _as_tnfa(pattern)
    choice = select_engine(tnfa.size, config.word_bits, mode)
    whole = tnfa.size
    if choice.kind == "classic":
        return Engine(tnfa, "classic", choice.reason)
    if choice.kind == "simple":
        return DecomposedEngine(tnfa, "simple", whole, SimpleDS, choice.reason)
    if choice.kind == "separator":
        return DecomposedEngine(tnfa, "separator", whole, lambda a: SeparatorDS(a, notice), choice.reason)
    if choice.kind == "fr":
        cache = FRTableCache(config.fr_budget)
        x = min(config.cluster_size, max(6, int(math.log2(config.fr_budget))))
        return DecomposedEngine(tnfa, "fr", x, lambda a: FrDS(a, cache, notice), choice.reason)
    return DecomposedEngine(tnfa, "nested", config.cluster_size,
                            lambda a: SeparatorDS(a, notice), choice.reason)
