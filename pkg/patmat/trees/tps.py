"""
Tree path subsequence
树路径子序列

Reports the pairs (i, j) such that the root-to-leaf path ending at the i-th leaf
of P is a subsequence of the root-to-leaf path ending at the j-th leaf of T.
Leaves are numbered 1.. from left to right in both trees.

Both algorithms walk T depth-first while keeping a state: an antichain of nodes
of P' (P with a β-labeled pseudo-leaf under every leaf). Reading a text node y
replaces every state node labeled like y by its children (Down). When a text
leaf is reached, the pseudo-leaves in the state name the included paths.

- tps_simple keeps one state in a node dictionary and undoes each Down on the
  way back up (Up).
- tps_fast stores the state as one bit mask per micro tree, updates it with
  tabulated Child_M masks and visits light children before the heavy child so
  only O(log n_T) states are alive at once.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Set, Tuple

from ..core.errors import PatmatError
from .tree import BETA, LabeledTree

PathPair = Tuple[int, int]


@dataclass
class TpsStats:
    max_live_states: int = 0
    table_hits: int = 0
    direct_computations: int = 0
    micro_trees: int = 0


class PaddedPattern:
    """P' : pattern nodes keep their ids; the pseudo-leaf under the i-th leaf is n_P + i - 1."""

    def __init__(self, p: LabeledTree):
        if p.root is None:
            raise PatmatError("pattern tree is empty")
        self.pattern = p
        leaves = p.leaves()
        n = p.size
        labels: List[Hashable] = list(p.labels) + [BETA] * len(leaves)
        children = [list(c) for c in p.children] + [[] for _ in leaves]
        self.leaf_ordinal: Dict[int, int] = {}
        for i, v in enumerate(leaves):
            children[v].append(n + i)
            self.leaf_ordinal[n + i] = i + 1
        self.tree = LabeledTree(labels, children)


def down(p: LabeledTree, x: Iterable[int], label: Hashable) -> FrozenSet[int]:
    """Child({v ∈ X : label(v) = label}) ∪ {v ∈ X : label(v) ≠ label}."""
    out: Set[int] = set()
    for v in x:
        if p.labels[v] == label:
            out.update(p.children[v])
        else:
            out.add(v)
    return frozenset(out)


class NodeDictionary:
    """State X split by label (X^c); X^p records what each text node's Down removed."""

    def __init__(self, p: LabeledTree, initial: Iterable[int]):
        self.p = p
        self.by_label: Dict[Hashable, Set[int]] = {}
        self.removed: Dict[int, List[int]] = {}
        for v in initial:
            self._add(v)

    def _add(self, v: int) -> None:
        self.by_label.setdefault(self.p.labels[v], set()).add(v)

    def _discard(self, v: int) -> None:
        bucket = self.by_label.get(self.p.labels[v])
        if bucket is not None:
            bucket.discard(v)
            if not bucket:
                del self.by_label[self.p.labels[v]]

    def down(self, y: int, label: Hashable) -> None:
        hit = self.by_label.pop(label, None)
        if not hit:
            return
        matched = sorted(hit)
        self.removed[y] = matched
        for v in matched:
            for c in self.p.children[v]:
                self._add(c)

    def up(self, y: int) -> None:
        matched = self.removed.pop(y, None)
        if matched is None:
            return
        for v in matched:
            for c in self.p.children[v]:
                self._discard(c)
            self._add(v)

    def state(self) -> FrozenSet[int]:
        return frozenset(v for bucket in self.by_label.values() for v in bucket)

    def pseudo_leaves(self) -> Set[int]:
        return self.by_label.get(BETA, set())


def tps_simple(p: LabeledTree, t: LabeledTree) -> Set[PathPair]:
    """Node-dictionary algorithm: one state, Down on entry, Up on exit."""
    if t.root is None:
        return set()
    padded = PaddedPattern(p)
    pt = padded.tree
    text_ordinal = {v: i + 1 for i, v in enumerate(t.leaves())}
    nd = NodeDictionary(pt, [pt.root])
    out: Set[PathPair] = set()
    stack: List[Tuple[int, bool]] = [(t.root, False)]
    while stack:
        y, leaving = stack.pop()
        if leaving:
            nd.up(y)
            continue
        nd.down(y, t.labels[y])
        if not t.children[y]:
            j = text_ordinal[y]
            out.update((padded.leaf_ordinal[v], j) for v in nd.pseudo_leaves())
        stack.append((y, True))
        for c in reversed(t.children[y]):
            stack.append((c, False))
    return out


@dataclass
class MicroTree:
    root: int
    nodes: List[int]  # P'-node ids; bit i stands for nodes[i], root at bit 0
    shape: str
    single_child: List[int]  # bit mask of in-tree children per position
    eq: Dict[Hashable, int] = field(default_factory=dict)
    leaf_mask: int = 0
    owner: int = -1  # micro tree holding root as a non-root node
    owner_bit: int = 0


@dataclass
class MicroTreeDecomposition:
    micro_trees: List[MicroTree]
    size: int
    tables: Dict[str, Optional[List[int]]]

    def __len__(self) -> int:
        return len(self.micro_trees)

    def child_mask(self, m: MicroTree, mask: int, stats: Optional[TpsStats] = None) -> int:
        table = self.tables.get(m.shape)
        if table is not None:
            if stats is not None:
                stats.table_hits += 1
            return table[mask]
        if stats is not None:
            stats.direct_computations += 1
        return _direct_children(m.single_child, mask)


def _direct_children(single: List[int], mask: int) -> int:
    out = 0
    while mask:
        low = mask & -mask
        out |= single[low.bit_length() - 1]
        mask ^= low
    return out


def _shape_key(p: LabeledTree, members: Set[int], root: int) -> str:
    parts: List[str] = []
    stack: List[object] = [root]
    while stack:
        item = stack.pop()
        if item == ")":
            parts.append(")")
            continue
        parts.append("(")
        stack.append(")")
        for c in reversed(p.children[item]):
            if c in members:
                stack.append(c)
    return "".join(parts)


def micro_decompose(p: LabeledTree, s: int, budget: int = 65536,
                    word_bits: int = 64) -> MicroTreeDecomposition:
    """Greedy bottom-up clustering into connected micro trees of at most s nodes.

    Micro trees overlap only where one's root is a leaf of another. Child_M
    is tabulated once per balanced-parenthesis shape when 2^|M| fits the budget.
    """
    if p.root is None:
        raise PatmatError("cannot decompose an empty tree")
    if s < 2 or s > word_bits:
        raise PatmatError(f"micro-tree size must be in 2..{word_bits}, got {s}")
    groups: List[Tuple[int, List[int]]] = []
    open_cluster: Dict[int, List[int]] = {}
    for v in p.postorder():
        cur = [v]
        for c in p.children[v]:
            a = open_cluster.pop(c)
            if len(cur) + len(a) <= s:
                cur.extend(a)
            elif 1 + len(a) <= s:
                if len(cur) > 1:
                    groups.append((v, cur))
                cur = [v] + a
            else:
                groups.append((c, a))
                if len(cur) + 1 > s:
                    groups.append((v, cur))
                    cur = [v]
                cur.append(c)
        if v == p.root:
            groups.append((v, cur))
        else:
            open_cluster[v] = cur

    pre = {v: i for i, v in enumerate(p.preorder())}
    groups.sort(key=lambda g: pre[g[0]])
    micro: List[MicroTree] = []
    tables: Dict[str, Optional[List[int]]] = {}
    owner_of: Dict[int, Tuple[int, int]] = {}
    for root, members in groups:
        nodes = sorted(set(members), key=pre.__getitem__)
        pos = {v: i for i, v in enumerate(nodes)}
        member_set = set(nodes)
        single = [0] * len(nodes)
        eq: Dict[Hashable, int] = {}
        leaf_mask = 0
        for v, i in pos.items():
            for c in p.children[v]:
                if c in member_set:
                    single[i] |= 1 << pos[c]
            eq[p.labels[v]] = eq.get(p.labels[v], 0) | (1 << i)
            if p.labels[v] is BETA:
                leaf_mask |= 1 << i
        shape = _shape_key(p, member_set, root)
        if shape not in tables:
            if (1 << len(nodes)) <= budget:
                table = [0] * (1 << len(nodes))
                for mask in range(1, 1 << len(nodes)):
                    low = mask & -mask
                    table[mask] = table[mask ^ low] | single[low.bit_length() - 1]
                tables[shape] = table
            else:
                tables[shape] = None
        mid = len(micro)
        for v in nodes:
            if v != root:
                owner_of[v] = (mid, pos[v])
        micro.append(MicroTree(root=root, nodes=nodes, shape=shape, single_child=single,
                               eq=eq, leaf_mask=leaf_mask))
    for m in micro:
        if m.root in owner_of:
            m.owner, m.owner_bit = owner_of[m.root]
    return MicroTreeDecomposition(micro_trees=micro, size=s, tables=tables)


def _heavy_and_lights(t: LabeledTree, sizes: List[int], v: int) -> Tuple[Optional[int], List[int]]:
    cs = t.children[v]
    if not cs:
        return None, []
    heavy = max(cs, key=sizes.__getitem__)
    return heavy, [c for c in cs if c != heavy]


def tps_fast(p: LabeledTree, t: LabeledTree, s: int = 16, budget: int = 65536,
             word_bits: int = 64, stats: Optional[TpsStats] = None) -> Set[PathPair]:
    """Micro-tree bit-mask algorithm with heavy-path traversal order."""
    if t.root is None:
        return set()
    if s > word_bits:
        raise PatmatError(f"micro-tree size {s} exceeds the word size {word_bits}")
    stats = stats if stats is not None else TpsStats()
    padded = PaddedPattern(p)
    pt = padded.tree
    dec = micro_decompose(pt, s, budget, word_bits)
    ms = dec.micro_trees
    stats.micro_trees = len(ms)
    ordinals = [[padded.leaf_ordinal.get(v, 0) for v in m.nodes] for m in ms]

    def step(state: List[int], label: Hashable) -> List[int]:
        new = list(state)
        for k, m in enumerate(ms):
            x = state[k]
            eq = m.eq.get(label, 0)
            hit = x & eq
            if hit:
                x = dec.child_mask(m, hit, stats) | (x & ~eq)
            if m.owner >= 0:
                x = (x & ~1) | ((new[m.owner] >> m.owner_bit) & 1)
            new[k] = x
        return new

    def report(state: List[int], y: int, out: Set[PathPair]) -> None:
        j = text_ordinal[y]
        for k, m in enumerate(ms):
            hits = state[k] & m.leaf_mask
            while hits:
                low = hits & -hits
                out.add((ordinals[k][low.bit_length() - 1], j))
                hits ^= low

    sizes = [1] * t.size
    for v in t.postorder():
        par = t.parent[v]
        if par is not None:
            sizes[par] += sizes[v]
    text_ordinal = {v: i + 1 for i, v in enumerate(t.leaves())}
    initial = [1 if m.root == pt.root else 0 for m in ms]

    out: Set[PathPair] = set()
    root_state = step(initial, t.labels[t.root])
    if not t.children[t.root]:
        report(root_state, t.root, out)
    heavy, lights = _heavy_and_lights(t, sizes, t.root)
    stack: List[list] = [[t.root, root_state, lights, 0]]
    stats.max_live_states = max(stats.max_live_states, 1)
    while stack:
        frame = stack[-1]
        y, state, lights, i = frame
        if i < len(lights):
            frame[3] = i + 1
            c = lights[i]
            child_state = step(state, t.labels[c])
        else:
            stack.pop()
            c, _ = _heavy_and_lights(t, sizes, y)
            if c is None:
                continue
            child_state = step(state, t.labels[c])
        if not t.children[c]:
            report(child_state, c, out)
        _, c_lights = _heavy_and_lights(t, sizes, c)
        stack.append([c, child_state, c_lights, 0])
        stats.max_live_states = max(stats.max_live_states, len(stack))
    return out
