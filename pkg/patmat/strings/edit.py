"""
String edit distance and approximate string matching
字符串编辑距离与近似匹配

- edit_distance: unit-cost dynamic program, one row kept.
- edit_distance_fr: the same matrix evaluated x×x cells at a time. A cell's
  output (bottom and right boundary deltas) depends only on its boundary
  deltas and on which characters are equal, so cells are memoized on rank
  vectors: inside a macro cell of y×y cells every character shared between the
  two substrings gets its rank among the shared characters, and every other
  character gets 0. Equal positive ranks mean equal characters, whatever the
  alphabet size.
- approx_positions: Sellers' dynamic program (zero top row).
"""
from __future__ import annotations

import math
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple, Union

from ..core.errors import PatmatError

Text = Union[str, bytes, Sequence[Hashable]]
CellKey = Tuple[Tuple[int, ...], Tuple[int, ...], Tuple[int, ...], Tuple[int, ...]]


def _no_notice(message: str) -> None:
    pass


def edit_distance(s: Text, t: Text) -> int:
    """Unit-cost edit distance in O(min(|s|, |t|)) space."""
    if len(t) > len(s):
        s, t = t, s
    prev = list(range(len(t) + 1))
    for i in range(1, len(s) + 1):
        cur = [i] + [0] * len(t)
        a = s[i - 1]
        for j in range(1, len(t) + 1):
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a != t[j - 1]))
        prev = cur
    return prev[-1]


def distance_matrix(s: Text, t: Text) -> List[List[int]]:
    """The full (|s|+1) × (|t|+1) matrix D."""
    d = [[j for j in range(len(t) + 1)]]
    for i in range(1, len(s) + 1):
        row = [i] + [0] * len(t)
        for j in range(1, len(t) + 1):
            row[j] = min(d[i - 1][j] + 1, row[j - 1] + 1, d[i - 1][j - 1] + (s[i - 1] != t[j - 1]))
        d.append(row)
    return d


def _ranks(a: Sequence[Hashable], b: Sequence[Hashable]) -> Tuple[List[int], List[int]]:
    shared = set(a) & set(b)
    try:
        order = sorted(shared)
    except TypeError:
        order = []
        for ch in list(a) + list(b):
            if ch in shared and ch not in order:
                order.append(ch)
    rank = {ch: i + 1 for i, ch in enumerate(order)}
    return [rank.get(ch, 0) for ch in a], [rank.get(ch, 0) for ch in b]


def _eval_cell(sr: Tuple[int, ...], tr: Tuple[int, ...], top: Tuple[int, ...],
               left: Tuple[int, ...]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Bottom-row and right-column deltas of one cell with corner value 0."""
    rows, cols = len(sr), len(tr)
    prev = [0] * (cols + 1)
    for c in range(cols):
        prev[c + 1] = prev[c] + top[c]
    right = []
    edge = 0
    for r in range(rows):
        edge += left[r]
        cur = [edge] + [0] * cols
        a = sr[r]
        for c in range(cols):
            same = a > 0 and a == tr[c]
            cur[c + 1] = min(prev[c + 1] + 1, cur[c] + 1, prev[c] + (0 if same else 1))
        right.append(cur[cols] - prev[cols])
        prev = cur
    bottom = tuple(prev[c + 1] - prev[c] for c in range(cols))
    return bottom, tuple(right)


class CellTable:
    """Memo of cell evaluations, shared across calls."""

    def __init__(self):
        self.table: Dict[CellKey, Tuple[Tuple[int, ...], Tuple[int, ...]]] = {}
        self.hits = 0

    def lookup(self, key: CellKey) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        hit = self.table.get(key)
        if hit is not None:
            self.hits += 1
            return hit
        out = _eval_cell(*key)
        self.table[key] = out
        return out


def edit_distance_fr(s: Text, t: Text, x: int = 4, y: int = 4, word_bits: int = 64,
                     table: Optional[CellTable] = None,
                     notice: Callable[[str], None] = _no_notice) -> int:
    """
    Edit distance through memoized x×x cells.
    四俄罗斯人方法计算编辑距离

    Args:
        x: cell side
        y: macro-cell side, in cells; ranks are computed per macro cell
        word_bits: a cell's rank vector, x·⌈log2(xy+1)⌉ bits, must fit

    Falls back to the plain dynamic program (with a notice) when it does not.
    """
    if x < 1 or y < 1:
        raise PatmatError(f"cell sizes must be >= 1, got x={x}, y={y}")
    if x * math.ceil(math.log2(x * y + 1)) > word_bits:
        notice(f"cell encoding {x}x{y} exceeds {word_bits}-bit words; using the plain dynamic program")
        return edit_distance(s, t)
    m, n = len(s), len(t)
    if m == 0 or n == 0:
        return m + n
    table = table if table is not None else CellTable()
    macro = x * y
    rank_cache: Dict[Tuple[int, int], Tuple[List[int], List[int]]] = {}

    def ranks_for(mi: int, mj: int) -> Tuple[List[int], List[int]]:
        key = (mi, mj)
        if key not in rank_cache:
            rank_cache[key] = _ranks(s[mi * macro:(mi + 1) * macro], t[mj * macro:(mj + 1) * macro])
        return rank_cache[key]

    boundary = list(range(n + 1))  # D[I·x][·]
    for i0 in range(0, m, x):
        rows = min(x, m - i0)
        left_col = [i0 + r for r in range(rows + 1)]  # D[i0..i0+rows][0]
        new_boundary = [i0 + rows] + [0] * n
        for j0 in range(0, n, x):
            cols = min(x, n - j0)
            sr_all, tr_all = ranks_for(i0 // macro, j0 // macro)
            si, tj = i0 % macro, j0 % macro
            sr = tuple(sr_all[si:si + rows])
            tr = tuple(tr_all[tj:tj + cols])
            top = tuple(boundary[j0 + c + 1] - boundary[j0 + c] for c in range(cols))
            left = tuple(left_col[r + 1] - left_col[r] for r in range(rows))
            bottom, right = table.lookup((sr, tr, top, left))
            corner = boundary[j0 + cols]
            col = [corner]
            for r in range(rows):
                col.append(col[-1] + right[r])
            left_col = col
            value = new_boundary[j0]
            for c in range(cols):
                value += bottom[c]
                new_boundary[j0 + c + 1] = value
        boundary = new_boundary
    return boundary[n]


def approx_positions(p: Text, q: Text, k: int, with_starts: bool = False
                     ) -> Union[List[int], List[Tuple[int, int]]]:
    """
    End positions j (1-based) with min_i ed(P, Q[i..j]) ≤ k.

    With with_starts, each j comes with the start of one optimal window.
    """
    m = len(p)
    if k < 0 or k >= m:
        raise PatmatError(f"need 0 <= k < |P| = {m}, got k={k}")
    col = list(range(m + 1))
    start = [1] * (m + 1)
    out: List = []
    for j in range(1, len(q) + 1):
        b = q[j - 1]
        new = [0] * (m + 1)
        new_start = [j + 1] + [0] * m
        for i in range(1, m + 1):
            diag = col[i - 1] + (p[i - 1] != b)
            best, src = diag, start[i - 1]
            if col[i] + 1 < best:
                best, src = col[i] + 1, start[i]
            if new[i - 1] + 1 < best:
                best, src = new[i - 1] + 1, new_start[i - 1]
            new[i], new_start[i] = best, src
        col, start = new, new_start
        if col[m] <= k:
            out.append((j, start[m]) if with_starts else j)
    return out
