"""
Search on Ziv-Lempel compressed text
压缩文本上的近似匹配与正则匹配

Both searches scan the elements left to right and never decompress the text.
Phrase lengths come from the τ-spaced special elements; the dictionary is
reached through ReferenceView, so ZL78 search holds only the special set,
its shortcuts, the nonempty internal-match sets and pattern-sized windows.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple, Union

from ..core.errors import PatmatError
from ..regex.core import RegexAst, Tnfa, parse_regex, thompson
from ..strings.edit import approx_positions
from .codec import CompressedText, ReferenceView, SpecialSet, select_special

Source = Union[CompressedText, ReferenceView]


@dataclass
class CSearchStats:
    """Objects retained by a compressed search / 压缩搜索的常驻对象计数"""
    special: int = 0  # |C|
    shortcuts: int = 0  # depth-(m+k) ancestors stored at members
    mi_entries: int = 0  # positions held in nonempty internal-match sets
    working: int = 0  # peak pattern-sized window and column state
    elements: int = 0

    @property
    def retained(self) -> int:
        return self.special + self.shortcuts + self.mi_entries + self.working


@dataclass
class ApproxDescription:
    index: int  # element index i, 1-based
    u: int  # phrase start, 1-based
    l: int  # phrase length
    rpre: bytes
    rsuf: bytes
    m_i: Tuple[int, ...] = ()  # phrase-relative internal matches
    m_o: Tuple[int, ...] = ()  # matches in rsuf(z_{i-1}) · rpre(z_i)
    matches: Tuple[int, ...] = ()  # absolute positions ending inside the phrase


def _view(z: Source) -> ReferenceView:
    return z if isinstance(z, ReferenceView) else ReferenceView(z)


def _pattern(p: Union[str, bytes]) -> bytes:
    return p.encode("utf-8") if isinstance(p, str) else bytes(p)


def _shortcuts(c: SpecialSet, view: ReferenceView, limit: int) -> Dict[int, int]:
    """For each member deeper than limit, its ancestor at depth limit."""
    out: Dict[int, int] = {}
    for y in c.members():
        if c.depth[y] <= limit:
            continue
        above, _ = c.nearest(view, view.parent(y))
        if c.depth[above] > limit:
            out[y] = out[above]
        else:
            out[y] = view.ancestor(y, c.depth[y] - limit)
    return out


def _ends_in_match(p: bytes, s: bytes, k: int) -> bool:
    if not s:
        return False
    hits = approx_positions(p, s, k)
    return bool(hits) and hits[-1] == len(s)


def describe_elements(z: Source, p: Union[str, bytes], k: int, tau: int,
                      stats: Optional[CSearchStats] = None) -> Iterator[ApproxDescription]:
    """
    Per-element descriptions for approximate search with at most k errors.
    逐个压缩元素计算描述

    Only rsuf of the previous element and the nonempty internal-match sets
    survive from one element to the next.
    """
    p = _pattern(p)
    m = len(p)
    if not 0 <= k < m:
        raise PatmatError(f"need 0 <= k < |P| = {m}, got k={k}")
    view = _view(z)
    stats = stats if stats is not None else CSearchStats()
    window = m + k
    c = select_special(view, tau)
    shortcut = _shortcuts(c, view, window)
    stats.special = len(c)
    stats.shortcuts = len(shortcut)

    internal: Dict[int, Tuple[int, ...]] = {}
    next_node = 1
    u = 1
    prev_rsuf = b""
    for i in range(1, view.z.n + 1):
        v = view.element_node(i)
        while next_node <= v:
            w = next_node
            y, path = c.nearest(view, w)
            lw = len(path) + c.depth[y]
            tail = bytes(reversed(view.path_labels(w, window)))
            held = internal.get(view.parent(w), ())
            if _ends_in_match(p, tail, k):
                held = held + (lw,)
            if held:
                internal[w] = held
                stats.mi_entries += len(held)
            next_node += 1

        y, path = c.nearest(view, v)
        l = len(path) + c.depth[y]
        if l <= window:
            head = v
        elif c.depth[y] > window:
            head = shortcut[y]
        else:
            head = view.ancestor(v, l - window)
        rpre = bytes(reversed(view.path_labels(head, window)))

        need = min(window, u + l - 1)
        collected: List[int] = []
        t = i
        while need > 0:
            labels = view.path_labels(view.element_node(t), need)
            collected.extend(labels)
            need -= len(labels)
            t -= 1
        rsuf = bytes(reversed(collected))

        m_i = internal.get(v, ())
        m_o = tuple(approx_positions(p, prev_rsuf + rpre, k))
        shift = u - 1 - len(prev_rsuf)
        found = {j + u - 1 for j in m_i}
        found.update(j + shift for j in m_o if u <= j + shift <= u + l - 1)
        stats.working = max(stats.working, len(prev_rsuf) + len(rpre) + len(rsuf) + m + 1)
        stats.elements = i
        yield ApproxDescription(i, u, l, rpre, rsuf, m_i, m_o, tuple(sorted(found)))
        prev_rsuf = rsuf
        u += l


def capprox_search(z: Source, p: Union[str, bytes], k: int, tau: int,
                   stats: Optional[CSearchStats] = None) -> List[int]:
    """End positions of approximate occurrences of p, as approx_positions on the decompressed text."""
    out: List[int] = []
    for d in describe_elements(z, p, k, tau, stats):
        out.extend(d.matches)
    return out


def _tnfa(r: Union[str, bytes, RegexAst, Tnfa]) -> Tnfa:
    if isinstance(r, Tnfa):
        return r
    return thompson(r if isinstance(r, RegexAst) else parse_regex(r))


def _fold(n: Tnfa, sets: List[int], labels: List[int], s0: int) -> List[int]:
    for a in labels:
        sets = [n.close(n.move(x | s0, a)) for x in sets]
    return sets


def transition_sets_at(c: SpecialSet, z: Source, n: Tnfa) -> Dict[int, List[int]]:
    """
    δ̄({s}, phrase(y)) for every member y and state s, with δ̄(S, ε) = Close(S ∪ {θ}).
    特殊元素上的转移集合

    Each member starts from its nearest special ancestor, at most 2τ steps away.
    """
    view = _view(z)
    s0 = n.close(1 << n.theta)
    out: Dict[int, List[int]] = {0: [n.close((1 << s) | s0) for s in range(n.size)]}
    for y in c.members():
        if y == 0:
            continue
        above, path = c.nearest(view, view.parent(y))
        labels = [view.label(x) for x in reversed([y] + path)]
        out[y] = _fold(n, out[above], labels, s0)
    return out


def _chain(lastmatch: List[Tuple[Optional[int], ...]], view: ReferenceView, v: int, s: int
           ) -> Iterator[int]:
    x = lastmatch[v][s]
    while x is not None:
        yield x
        x = lastmatch[view.parent(x)][s]


def cregex_search(z: Source, r: Union[str, bytes, RegexAst, Tnfa], tau: int,
                  allow_empty: bool = True, trace: Optional[List[Tuple[int, int, int, int]]] = None,
                  stats: Optional[CSearchStats] = None) -> List[int]:
    """
    Match end positions of r in the compressed text, as find_matches on the decompressed text.
    压缩文本上的正则匹配

    Args:
        trace: when given, receives (position, element, ancestor, state) per report
    """
    n = _tnfa(r)
    view = _view(z)
    stats = stats if stats is not None else CSearchStats()
    s0 = n.close(1 << n.theta)
    accept = 1 << n.phi
    if allow_empty and s0 & accept:
        return list(range(view.z.length + 1))
    c = select_special(view, tau)
    sets = transition_sets_at(c, view, n)
    stats.special = len(c)

    depth = [0]
    lastmatch: List[Tuple[Optional[int], ...]] = [(None,) * n.size]
    next_node = 1
    state = 0
    u = 1
    out: List[int] = []
    for i in range(1, view.z.n + 1):
        v = view.element_node(i)
        while next_node <= v:
            w = next_node
            y, path = c.nearest(view, w)
            at_w = _fold(n, sets[y], [view.label(x) for x in reversed(path)], s0)
            parent = view.parent(w)
            depth.append(depth[parent] + 1)
            lastmatch.append(tuple(w if at_w[s] & accept else lastmatch[parent][s]
                                   for s in range(n.size)))
            next_node += 1

        starts = sorted(n.states(state) | {n.theta})
        chains = [((depth[x], x, s) for x in _chain(lastmatch, view, v, s)) for s in starts]
        last = None
        found = []
        for d, x, s in heapq.merge(*chains, reverse=True):
            pos = u + d - 1
            if trace is not None:
                trace.append((pos, i, x, s))
            if pos != last:
                found.append(pos)
                last = pos
        out.extend(reversed(found))

        y, path = c.nearest(view, v)
        merged = 0
        for s in starts:
            merged |= sets[y][s]
        state = _fold(n, [merged], [view.label(x) for x in reversed(path)], s0)[0]
        u += depth[v]
    stats.elements = view.z.n
    return out
