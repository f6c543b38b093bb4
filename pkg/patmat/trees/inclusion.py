"""
Ordered tree inclusion
有序树包含

Key behavioral rules:
- Node lists are sequences of T-node ids. An ordered list is a left-to-right
  antichain, a semiordered one may also step from a node to its descendant.
- emb() composes the set procedures Parent, Nca, Fl, Mop and Deep bottom-up
  over P and returns the deep occurrences of P in T (roots of deepest embeddings).
- km_oracle() is the independent dynamic program used to cross-check emb().
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, List, Optional, Sequence, Tuple

from ..core.errors import PatmatError
from .tree import LabeledTree, TreeIndex, deep

Pair = Tuple[int, int]


@dataclass
class FlCounter:
    """Node touches and worklist link updates made by fl(), per call and in total."""
    calls: int = 0
    touches: int = 0
    per_call: List[int] = field(default_factory=list)
    list_ops: int = 0
    ops_per_call: List[int] = field(default_factory=list)

    def record(self, n: int, ops: int = 0) -> None:
        self.calls += 1
        self.touches += n
        self.per_call.append(n)
        self.list_ops += ops
        self.ops_per_call.append(ops)


class FlWorklist:
    """
    One doubly linked list holding the lists Z, S and R of fl().
    fl() 的工作链表: 一条双向链表同时表示 Z, S, R

    Slot k holds a T-node; slots keep the order of the input list. Pred/Succ
    link every live slot, Next links the live slots still in Z (S replaces a Z
    entry in place by its parent). A live slot outside the Next chain is in R.
    """

    def __init__(self, x: Sequence[int]):
        m = len(x)
        self.node: List[int] = list(x)
        self.pred: List[int] = [k - 1 for k in range(m)]
        self.succ: List[int] = [k + 1 if k + 1 < m else -1 for k in range(m)]
        self.next: List[int] = list(self.succ)
        self.first = 0 if m else -1
        self.z_head = self.first
        self.ops = 0

    def unlink(self, k: int) -> None:
        p, s = self.pred[k], self.succ[k]
        if p >= 0:
            self.succ[p] = s
        else:
            self.first = s
        if s >= 0:
            self.pred[s] = p
        self.ops += 1

    def leave_z(self, prev: int, k: int) -> None:
        """Bypass slot k in the Next chain; prev is the Z slot before k, or -1."""
        if prev >= 0:
            self.next[prev] = self.next[k]
        else:
            self.z_head = self.next[k]
        self.ops += 1

    def drop(self, prev: int, k: int) -> None:
        self.leave_z(prev, k)
        self.unlink(k)

    def deep_s(self, ix: TreeIndex) -> None:
        """Deep over the semiordered Z chain: keep only entries without a descendant in Z."""
        cur, before = self.z_head, -1
        if cur < 0:
            return
        k = self.next[cur]
        while k >= 0:
            nk = self.next[k]
            a, b = self.node[cur], self.node[k]
            if ix.left_of(a, b):
                before, cur = cur, k
            elif ix.is_ancestor(a, b):
                self.drop(before, cur)
                cur = k
            elif ix.is_ancestor(b, a):
                self.drop(cur, k)
            else:
                raise PatmatError("fl() needs an ordered node list")
            k = nk

    def deep_star(self, ix: TreeIndex) -> None:
        """Drop Z entries that have a descendant in R; such a descendant is a list neighbour."""
        prev, k = -1, self.z_head
        node, pred, succ = self.node, self.pred, self.succ
        while k >= 0:
            nk = self.next[k]
            s = node[k]
            if ((pred[k] >= 0 and ix.is_ancestor(s, node[pred[k]]))
                    or (succ[k] >= 0 and ix.is_ancestor(s, node[succ[k]]))):
                self.drop(prev, k)
            else:
                prev = k
            k = nk

    def members(self) -> List[int]:
        out: List[int] = []
        k = self.first
        while k >= 0:
            out.append(self.node[k])
            k = self.succ[k]
        return out


def parent_list(x: Sequence[int], ix: TreeIndex) -> List[int]:
    """Parents of an ordered list, root dropped; the result is semiordered."""
    par = ix.tree.parent
    return [par[v] for v in x if par[v] is not None]


def nca_list(u: Sequence[Pair], ix: TreeIndex) -> List[int]:
    return [ix.nca(a, b) for a, b in u]


def fl(x: Sequence[int], alpha: Hashable, ix: TreeIndex,
       counter: Optional[FlCounter] = None) -> List[int]:
    """Deep set of the nearest α-labeled ancestors (self included) of the nodes in x.

    Worklist rounds over an FlWorklist: α-labeled entries settle into R in place,
    the others are replaced by their parents, then Deep and Deep* prune the
    new Z. x must be ordered; the result is ordered.
    """
    t = ix.tree
    labels, par = t.labels, t.parent
    wl = FlWorklist(x)
    node = wl.node
    touches = 0
    while wl.z_head >= 0:
        prev, k = -1, wl.z_head
        while k >= 0:
            touches += 1
            nk = wl.next[k]
            v = node[k]
            if labels[v] == alpha:
                wl.leave_z(prev, k)
            elif par[v] is None:
                wl.drop(prev, k)
            else:
                node[k] = par[v]
                prev = k
            k = nk
        wl.deep_s(ix)
        wl.deep_star(ix)
    if counter is not None:
        counter.record(touches, wl.ops)
    return wl.members()


def mop(y: Sequence[Pair], x: Sequence[int], ix: TreeIndex) -> List[Pair]:
    """Minimum ordered pairs: for each x' matched to the rightmost y₂ ⊲ x', emit (y₁, x').

    y and x must be ordered (their second components deep and left-to-right).
    """
    if not y or not x:
        return []
    left_of = ix.left_of
    j = 0
    while j < len(x) and not left_of(y[0][1], x[j]):
        j += 1
    if j == len(x):
        return []
    out: List[Pair] = []
    cur_y, cur_x, h = y[0][0], x[j], j
    for i in range(1, len(y)):
        while h < len(x) and not left_of(y[i][1], x[h]):
            h += 1
        if h == len(x):
            out.append((cur_y, cur_x))
            return out
        if left_of(cur_x, x[h]):
            out.append((cur_y, cur_x))
            cur_y, cur_x = y[i][0], x[h]
        elif cur_x == x[h]:
            cur_y = y[i][0]
    out.append((cur_y, cur_x))
    return out


def emb(p: LabeledTree, t: LabeledTree, ix: Optional[TreeIndex] = None,
        counter: Optional[FlCounter] = None) -> List[int]:
    """Deep occurrences of P in T, in left-to-right order; empty means P is not included."""
    if p.root is None or t.root is None:
        return []
    ix = ix or TreeIndex(t)
    leaves = t.leaves()
    result: List[Optional[List[int]]] = [None] * p.size
    for v in p.postorder():
        cs = p.children[v]
        alpha = p.labels[v]
        if not cs:
            r = fl(leaves, alpha, ix, counter)
        elif len(cs) == 1:
            r = fl(deep(parent_list(result[cs[0]], ix), ix), alpha, ix, counter)
        else:
            u: List[Pair] = [(w, w) for w in result[cs[0]]]
            for c in cs[1:]:
                u = mop(u, result[c], ix)
                if not u:
                    break
            r = fl(deep(nca_list(u, ix), ix), alpha, ix, counter) if u else []
        result[v] = r
        for c in cs:
            result[c] = None
    return result[p.root] or []


_TOP = -1


def km_oracle(p: LabeledTree, t: LabeledTree, ix: Optional[TreeIndex] = None) -> bool:
    """P ⊑ T iff ρ(root(P), ⊥) ≠ ⊤.

    ρ(v, q) is the closest right relative of q (least postorder among the nodes
    to the right of q) admitting a root-preserving embedding of P(v). ⊥ lies to
    the left of every node; ⊤ means no such node exists.
    """
    if p.root is None or t.size == 0:
        return False
    return _RhoTable(p, t, ix or TreeIndex(t)).rho(p.root, None) != _TOP


class _RhoTable:
    """ρ rows for every P-node, filled bottom-up over P.

    The right relatives of q are the nodes with preorder >= pre(q) + size(q),
    so row[s] holds the least-postorder embedding root at preorder >= s and
    ρ(v, q) is a single lookup.
    """

    def __init__(self, p: LabeledTree, t: LabeledTree, ix: TreeIndex):
        self.ix = ix
        n = t.size
        self.rows: List[List[int]] = [[] for _ in range(p.size)]
        for v in p.postorder():
            cs = p.children[v]
            ok = [t.labels[w] == p.labels[v] and self._root_preserving(cs, w) for w in range(n)]
            row = [_TOP] * (n + 1)
            for s in range(n - 1, -1, -1):
                w, best = ix.by_pre[s], row[s + 1]
                row[s] = w if ok[w] and (best == _TOP or ix.post[w] < ix.post[best]) else best
            self.rows[v] = row

    def rho(self, v: int, q: Optional[int]) -> int:
        start = 0 if q is None else self.ix.pre[q] + self.ix.size[q]
        return self.rows[v][start]

    def _max_left(self, w: int) -> Optional[int]:
        """Greatest left relative of w in postorder, None for ⊥."""
        k = self.ix.post[w] - self.ix.size[w]
        return self.ix.by_post[k] if k >= 0 else None

    def _root_preserving(self, cs: Sequence[int], w: int) -> bool:
        # p_1 = ρ(v_1, max lr(w)), p_k = ρ(v_k, p_{k-1}); every p_k must lie strictly below w
        x = self._max_left(w)
        for c in cs:
            x = self.rho(c, x)
            if x == _TOP or x == w or not self.ix.is_ancestor(w, x):
                return False
        return True


def including_subtrees(p: LabeledTree, t: LabeledTree, ix: Optional[TreeIndex] = None) -> List[int]:
    """All u with P ⊑ T(u): the deep occurrences and their ancestors, in preorder."""
    ix = ix or TreeIndex(t)
    marked = set()
    for v in emb(p, t, ix):
        cur: Optional[int] = v
        while cur is not None and cur not in marked:
            marked.add(cur)
            cur = t.parent[cur]
    return sorted(marked, key=ix.pre.__getitem__)
