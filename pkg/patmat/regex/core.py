"""
Regular expressions: parser, Thompson automaton, classic simulation
正则表达式：解析、Thompson 自动机、经典状态集模拟

Key behavioral rules:
- Patterns are bytes. Core operators are concatenation, `|` and `*`; `+`, `?`
  and bracket classes are sugar that expands into them (`?` through an ε leaf).
- Every parse-tree node v owns two states θ_v and φ_v. States are numbered θ_v,
  then the children's states left to right, then φ_v, so θ = 0, φ = |V|-1, the
  two endpoints of every labeled transition are consecutive, and all forward
  transitions go from a lower to a higher number.
- State-sets in this module are ints with bit i standing for state i.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set, Tuple, Union

from ..core.errors import RegexSyntaxError
from .bitstring import set_bits

BETA_SYM = 256  # pseudo-transition label, outside the byte alphabet

SYM, EPS, CONCAT, UNION, STAR = "sym", "eps", "concat", "union", "star"


@dataclass(frozen=True)
class RegexAst:
    kind: str
    symbol: Optional[int] = None
    children: Tuple["RegexAst", ...] = ()

    def __str__(self) -> str:
        return to_pattern(self)


def sym(b: int) -> RegexAst:
    return RegexAst(SYM, b)


EPSILON = RegexAst(EPS)


def concat(a: RegexAst, b: RegexAst) -> RegexAst:
    return RegexAst(CONCAT, None, (a, b))


def union(a: RegexAst, b: RegexAst) -> RegexAst:
    return RegexAst(UNION, None, (a, b))


def star(a: RegexAst) -> RegexAst:
    return RegexAst(STAR, None, (a,))


_META = set(b"|*+?()[]\\")


def to_pattern(ast: RegexAst) -> str:
    """Fully parenthesized pattern text; parse_regex(to_pattern(r)) has the same language."""
    if ast.kind == SYM:
        ch = ast.symbol
        text = chr(ch) if 32 < ch < 127 else f"\\x{ch:02x}"
        return "\\" + text if ch in _META else text
    if ast.kind == EPS:
        return "()"
    if ast.kind == STAR:
        return "(" + to_pattern(ast.children[0]) + ")*"
    op = "|" if ast.kind == UNION else ""
    return "(" + to_pattern(ast.children[0]) + op + to_pattern(ast.children[1]) + ")"


class _Parser:
    def __init__(self, text: bytes):
        self.text = text
        self.i = 0

    def peek(self) -> Optional[int]:
        return self.text[self.i] if self.i < len(self.text) else None

    def fail(self, message: str, at: Optional[int] = None) -> RegexSyntaxError:
        return RegexSyntaxError(message, self.i if at is None else at)

    def parse(self) -> RegexAst:
        if not self.text:
            raise self.fail("empty expression")
        ast = self.union()
        if self.i < len(self.text):
            raise self.fail("unbalanced ')'" if self.peek() == ord(")") else "unexpected character")
        return ast

    def union(self) -> RegexAst:
        left = self.concat()
        while self.peek() == ord("|"):
            self.i += 1
            left = union(left, self.concat())
        return left

    def concat(self) -> RegexAst:
        items: List[RegexAst] = []
        while True:
            c = self.peek()
            if c is None or c in (ord("|"), ord(")")):
                break
            items.append(self.repeat())
        if not items:
            what = "dangling '|'" if self.peek() == ord("|") or (
                self.i > 0 and self.text[self.i - 1] == ord("|")) else "empty expression"
            raise self.fail(what)
        out = items[0]
        for it in items[1:]:
            out = concat(out, it)
        return out

    def repeat(self) -> RegexAst:
        atom = self.atom()
        while True:
            c = self.peek()
            if c == ord("*"):
                atom = star(atom)
            elif c == ord("+"):
                atom = concat(atom, star(atom))
            elif c == ord("?"):
                atom = union(atom, EPSILON)
            else:
                return atom
            self.i += 1

    def escape(self) -> int:
        self.i += 1
        c = self.peek()
        if c is None:
            raise self.fail("dangling '\\'", self.i - 1)
        if c == ord("x"):
            digits = self.text[self.i + 1:self.i + 3]
            try:
                value = int(digits, 16) if len(digits) == 2 else None
            except ValueError:
                value = None
            if value is None:
                raise self.fail("bad \\x escape")
            self.i += 3
            return value
        self.i += 1
        return {ord("n"): 10, ord("t"): 9, ord("r"): 13}.get(c, c)

    def atom(self) -> RegexAst:
        c = self.peek()
        if c in (ord("*"), ord("+"), ord("?")):
            raise self.fail(f"dangling '{chr(c)}'")
        if c == ord("("):
            start = self.i
            self.i += 1
            if self.peek() == ord(")"):
                raise self.fail("empty group")
            inner = self.union()
            if self.peek() != ord(")"):
                raise self.fail("unbalanced '('", start)
            self.i += 1
            return inner
        if c == ord("["):
            return self.bracket()
        if c == ord("\\"):
            return sym(self.escape())
        self.i += 1
        return sym(c)

    def bracket(self) -> RegexAst:
        start = self.i
        self.i += 1
        members: List[int] = []
        while True:
            c = self.peek()
            if c is None:
                raise self.fail("unterminated '['", start)
            if c == ord("]") and members:
                self.i += 1
                break
            lo = self.escape() if c == ord("\\") else self._take()
            if self.peek() == ord("-") and self.i + 1 < len(self.text) and self.text[self.i + 1] != ord("]"):
                self.i += 1
                c2 = self.peek()
                hi = self.escape() if c2 == ord("\\") else self._take()
                if hi < lo:
                    raise self.fail("reversed class range")
                members.extend(range(lo, hi + 1))
            else:
                members.append(lo)
        seen: List[int] = []
        for m in members:
            if m not in seen:
                seen.append(m)
        out = sym(seen[0])
        for m in seen[1:]:
            out = union(out, sym(m))
        return out

    def _take(self) -> int:
        c = self.text[self.i]
        self.i += 1
        return c


def parse_regex(text: Union[str, bytes]) -> RegexAst:
    """Parse with precedence star > concatenation > union."""
    if isinstance(text, str):
        text = text.encode("utf-8")
    return _Parser(text).parse()


@dataclass
class ParseTree:
    """Array form of a RegexAst: node ids in preorder, root 0."""
    kind: List[str] = field(default_factory=list)
    symbol: List[Optional[int]] = field(default_factory=list)
    children: List[List[int]] = field(default_factory=list)
    parent: List[int] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.kind)

    @classmethod
    def from_ast(cls, ast: RegexAst) -> "ParseTree":
        pt = cls()
        stack: List[Tuple[RegexAst, int]] = [(ast, -1)]
        while stack:
            node, par = stack.pop()
            v = len(pt.kind)
            pt.kind.append(node.kind)
            pt.symbol.append(node.symbol)
            pt.children.append([])
            pt.parent.append(par)
            if par >= 0:
                pt.children[par].append(v)
            for c in reversed(node.children):
                stack.append((c, v))
        return pt


Transition = Tuple[int, Optional[int], int, bool]  # (src, label or None for ε, dst, is_back)


class Tnfa:
    """Thompson automaton over bytes (plus BETA_SYM for pseudo-transitions)."""

    def __init__(self, size: int, transitions: List[Transition],
                 node_states: Optional[Dict[int, Tuple[int, int]]] = None,
                 parse_tree: Optional["ParseTree"] = None, root_node: int = 0,
                 cut: Iterable[int] = ()):
        self.size = size
        self.theta = 0
        self.phi = size - 1
        self.transitions = transitions
        # parse node -> (θ_v, φ_v); nodes are the ids of parse_tree covered here
        self.node_states = node_states or {}
        self.parse_tree = parse_tree
        self.root_node = root_node
        self.cut = frozenset(cut)
        self.eps_out: List[List[int]] = [[] for _ in range(size)]
        self.eps_in: List[List[int]] = [[] for _ in range(size)]
        self.label: List[Optional[int]] = [None] * size  # label of an α-state's incoming edge
        for src, lab, dst, _back in transitions:
            if lab is None:
                self.eps_out[src].append(dst)
                self.eps_in[dst].append(src)
            else:
                self.label[dst] = lab
        self.by_symbol: Dict[int, List[int]] = {}
        for v, lab in enumerate(self.label):
            if lab is not None:
                self.by_symbol.setdefault(lab, []).append(v)

    @property
    def back_transitions(self) -> List[Transition]:
        return [t for t in self.transitions if t[3]]

    def is_alpha_state(self, v: int) -> bool:
        return self.label[v] is not None

    def close(self, s: int) -> int:
        """ε-closure of a state-set by breadth-first search."""
        out = s
        queue = deque(i for i in range(self.size) if s >> i & 1)
        while queue:
            u = queue.popleft()
            for v in self.eps_out[u]:
                if not out >> v & 1:
                    out |= 1 << v
                    queue.append(v)
        return out

    def move(self, s: int, a: int) -> int:
        out = 0
        for v in self.by_symbol.get(a, ()):
            if s >> (v - 1) & 1:
                out |= 1 << v
        return out

    def states(self, s: int) -> Set[int]:
        return set(set_bits(s))

    @property
    def nodes(self) -> List[int]:
        """Covered parse nodes (β leaves included) in preorder."""
        return sorted(self.node_states, key=lambda v: self.node_states[v][0])

    def node_children(self, v: int) -> List[int]:
        if v in self.cut or self.parse_tree is None:
            return []
        return self.parse_tree.children[v]

    def node_kind(self, v: int) -> str:
        return "beta" if v in self.cut else self.parse_tree.kind[v]

    def shape_key(self) -> str:
        """Label-stripped shape: preorder of (kind, arity); symbols and β both read as 'L'."""
        code = {SYM: "L", "beta": "L", EPS: "E", CONCAT: "C", UNION: "U", STAR: "S"}
        return "".join(code[self.node_kind(v)] for v in self.nodes)


def build_tnfa(pt: ParseTree, root: int = 0, cut: Iterable[int] = ()) -> Tnfa:
    """Thompson automaton of the subtree at root; nodes in `cut` become β leaves."""
    cut = set(cut)
    theta: Dict[int, int] = {}
    phi: Dict[int, int] = {}
    trans: List[Transition] = []
    counter = 0
    stack: List[Tuple[int, bool]] = [(root, False)]
    while stack:
        v, done = stack.pop()
        kind = pt.kind[v]
        if not done:
            theta[v] = counter
            counter += 1
            if v in cut or kind in (SYM, EPS):
                phi[v] = counter
                counter += 1
                label = BETA_SYM if v in cut else (pt.symbol[v] if kind == SYM else None)
                trans.append((theta[v], label, phi[v], False))
                continue
            stack.append((v, True))
            for c in reversed(pt.children[v]):
                stack.append((c, False))
            continue
        phi[v] = counter
        counter += 1
        cs = pt.children[v]
        t, f = theta[v], phi[v]
        if kind == CONCAT:
            a, b = cs
            trans += [(t, None, theta[a], False), (phi[a], None, theta[b], False),
                      (phi[b], None, f, False)]
        elif kind == UNION:
            a, b = cs
            trans += [(t, None, theta[a], False), (t, None, theta[b], False),
                      (phi[a], None, f, False), (phi[b], None, f, False)]
        else:
            (a,) = cs
            trans += [(t, None, theta[a], False), (t, None, f, False),
                      (phi[a], None, f, False), (phi[a], None, theta[a], True)]
    states = {v: (theta[v], phi[v]) for v in theta}
    return Tnfa(counter, trans, states, pt, root, cut & set(theta))


def thompson(ast: RegexAst) -> Tnfa:
    return build_tnfa(ParseTree.from_ast(ast))


def step(n: Tnfa, s: int, a: int) -> int:
    """Close(Move(s, a))."""
    return n.close(n.move(s, a))


def find_matches(n: Tnfa, q: Union[str, bytes], allow_empty: bool = True) -> List[int]:
    """1-based end positions j such that some window q[i..j] is in L(R).

    Position 0 and every other position also count when ε ∈ L(R) and
    allow_empty is set.
    """
    if isinstance(q, str):
        q = q.encode("utf-8")
    s0 = n.close(1 << n.theta)
    accept = 1 << n.phi
    empty_ok = allow_empty and bool(s0 & accept)
    out = [0] if empty_ok else []
    s = 0
    for j, a in enumerate(q, 1):
        s = n.close(n.move(s | s0, a))
        if empty_ok or s & accept:
            out.append(j)
    return out
