"""Shared fixtures and small brute-force oracles for the test suites."""
from __future__ import annotations

import itertools
import re
import random
import sys
from functools import lru_cache
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, Set, Tuple

import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from patmat.trees import LabeledTree, parse_tree, serialize  # noqa: E402


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240607)


# ---------------------------------------------------------------- trees

def random_tree(rng: random.Random, n: int, alphabet: Sequence[str] = "ab") -> LabeledTree:
    """Random ordered tree with n nodes, renumbered in preorder."""
    labels = [rng.choice(alphabet) for _ in range(n)]
    children: List[List[int]] = [[] for _ in range(n)]
    for v in range(1, n):
        children[rng.randrange(v)].append(v)
    return parse_tree(serialize(LabeledTree(labels, children)))


@lru_cache(maxsize=None)
def _forests(n: int) -> Tuple[tuple, ...]:
    if n == 0:
        return ((),)
    out = []
    for k in range(1, n + 1):
        for first in _shapes(k):
            for rest in _forests(n - k):
                out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def _shapes(n: int) -> Tuple[tuple, ...]:
    return _forests(n - 1)


def _shape_size(shape: tuple) -> int:
    return 1 + sum(_shape_size(c) for c in shape)


def _shape_text(shape: tuple, labels: Iterator[str]) -> str:
    own = next(labels)
    if not shape:
        return own
    return own + "(" + ",".join(_shape_text(c, labels) for c in shape) + ")"


def all_trees(max_nodes: int, alphabet: Sequence[str] = "ab") -> List[LabeledTree]:
    """Every ordered labeled tree with 1..max_nodes nodes."""
    out = []
    for n in range(1, max_nodes + 1):
        for shape in _shapes(n):
            for labels in itertools.product(alphabet, repeat=n):
                out.append(parse_tree(_shape_text(shape, iter(labels))))
    return out


def walk_up_ancestor(t: LabeledTree, v: int, w: int) -> bool:
    cur: Optional[int] = w
    while cur is not None:
        if cur == v:
            return True
        cur = t.parent[cur]
    return False


def walk_up_nca(t: LabeledTree, v: int, w: int) -> int:
    seen = set()
    cur: Optional[int] = v
    while cur is not None:
        seen.add(cur)
        cur = t.parent[cur]
    cur = w
    while cur not in seen:
        cur = t.parent[cur]
    return cur


def brute_deep(t: LabeledTree, xs: Sequence[int]) -> List[int]:
    xs = set(xs)
    keep = [v for v in xs if not any(u != v and walk_up_ancestor(t, v, u) for u in xs)]
    return sorted(keep)


def is_subsequence(small: Sequence, big: Sequence) -> bool:
    """Two-pointer scan."""
    i = 0
    for ch in big:
        if i < len(small) and small[i] == ch:
            i += 1
    return i == len(small)


def tps_oracle(p: LabeledTree, t: LabeledTree) -> Set[Tuple[int, int]]:
    out = set()
    for i, a in enumerate(p.leaves(), 1):
        pa = p.path_labels(a)
        for j, b in enumerate(t.leaves(), 1):
            if is_subsequence(pa, t.path_labels(b)):
                out.add((i, j))
    return out


# ---------------------------------------------------------------- strings

def plain_edit_distance(s: Sequence, t: Sequence) -> int:
    prev = list(range(len(t) + 1))
    for i in range(1, len(s) + 1):
        cur = [i] + [0] * len(t)
        for j in range(1, len(t) + 1):
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (s[i - 1] != t[j - 1]))
        prev = cur
    return prev[-1]


def brute_approx_positions(p: bytes, q: bytes, k: int) -> List[int]:
    out = []
    for j in range(1, len(q) + 1):
        if any(plain_edit_distance(p, q[i:j]) <= k for i in range(0, j + 1)):
            out.append(j)
    return out


# ---------------------------------------------------------------- regex

def _regex_forms(literals: int, alphabet: str) -> List[str]:
    if literals == 1:
        atoms = list(alphabet)
        return atoms + [a + "*" for a in atoms]
    out = []
    for k in range(1, literals):
        for left in _regex_forms_cached(k, alphabet):
            for right in _regex_forms_cached(literals - k, alphabet):
                for body in ("(" + left + ")(" + right + ")", "(" + left + ")|(" + right + ")"):
                    out.append("(" + body + ")")
                    out.append("(" + body + ")*")
    return out


@lru_cache(maxsize=None)
def _regex_forms_cached(literals: int, alphabet: str) -> Tuple[str, ...]:
    return tuple(_regex_forms(literals, alphabet))


def all_regexes(max_literals: int, alphabet: str = "ab") -> List[str]:
    """Every expression over the alphabet with at most max_literals literals and no nested star."""
    out: List[str] = []
    for n in range(1, max_literals + 1):
        out.extend(_regex_forms_cached(n, alphabet))
    return out


def random_regex(rng: random.Random, literals: int, alphabet: str = "ab") -> str:
    if literals == 1:
        text = rng.choice(alphabet)
    else:
        k = rng.randint(1, literals - 1)
        left = random_regex(rng, k, alphabet)
        right = random_regex(rng, literals - k, alphabet)
        text = "(" + left + (rng.choice(("", "|"))) + right + ")"
    return text + "*" if rng.random() < 0.25 else text


def all_strings(max_len: int, alphabet: str = "ab") -> List[bytes]:
    out = []
    for n in range(max_len + 1):
        out.extend("".join(p).encode() for p in itertools.product(alphabet, repeat=n))
    return out


def regex_oracle_matches(pattern: str, q: bytes) -> List[int]:
    """End positions j with some window q[i:j] fully matched by Python's re."""
    rx = re.compile(pattern.encode())
    return [j for j in range(len(q) + 1) if any(rx.fullmatch(q, i, j) for i in range(j + 1))]


def language_upto(pattern: str, max_len: int, alphabet: str = "ab") -> List[bytes]:
    rx = re.compile(pattern.encode())
    return [s for s in all_strings(max_len, alphabet) if rx.fullmatch(s)]


def closure_oracle(tnfa, states: Set[int]) -> Set[int]:
    """ε-closure through a Floyd–Warshall reachability matrix."""
    n = tnfa.size
    reach = [[i == j for j in range(n)] for i in range(n)]
    for src, label, dst, _back in tnfa.transitions:
        if label is None:
            reach[src][dst] = True
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                row_k = reach[k]
                row_i = reach[i]
                for j in range(n):
                    if row_k[j]:
                        row_i[j] = True
    return {j for i in states for j in range(n) if reach[i][j]}
