"""
Rooted, ordered, labeled trees
有序标签树及其遍历索引

Key behavioral rules:
- Nodes are integers 0..n-1. The parser numbers them in preorder, so the root is 0.
- Labels are strings. BETA is a reserved sentinel that never equals a parsed label.
- TreeIndex answers ancestor and left-of tests in O(1) and nca in O(log n).
- deep() turns a semiordered node list into an ordered antichain.
"""
from __future__ import annotations

from typing import Hashable, Iterable, List, Optional, Sequence

from ..core.errors import PatmatError, TreeSyntaxError


class _Beta:
    __slots__ = ()

    def __repr__(self) -> str:
        return "β"

    def __reduce__(self):
        return "BETA"


BETA = _Beta()

_SPECIAL = set('(),"\\')


class LabeledTree:
    """Ordered labeled tree stored as parallel label / parent / children arrays."""

    __slots__ = ("labels", "parent", "children", "root")

    def __init__(self, labels: Sequence[Hashable], children: Sequence[Sequence[int]]):
        n = len(labels)
        if len(children) != n:
            raise PatmatError("labels and children differ in length")
        self.labels: List[Hashable] = list(labels)
        self.children: List[List[int]] = [list(c) for c in children]
        self.parent: List[Optional[int]] = [None] * n
        for v, cs in enumerate(self.children):
            for c in cs:
                if not 0 <= c < n or c == v or self.parent[c] is not None:
                    raise PatmatError(f"node {c} has an invalid or second parent")
                self.parent[c] = v
        roots = [v for v in range(n) if self.parent[v] is None]
        if n and len(roots) != 1:
            raise PatmatError(f"expected exactly one root, found {len(roots)}")
        self.root: Optional[int] = roots[0] if roots else None
        if n and sum(1 for _ in self.preorder()) != n:
            raise PatmatError("tree contains a cycle")

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def label(self, v: int) -> Hashable:
        return self.labels[v]

    def is_leaf(self, v: int) -> bool:
        return not self.children[v]

    def preorder(self, start: Optional[int] = None) -> Iterable[int]:
        start = self.root if start is None else start
        if start is None:
            return
        stack = [start]
        while stack:
            v = stack.pop()
            yield v
            stack.extend(reversed(self.children[v]))

    def postorder(self, start: Optional[int] = None) -> Iterable[int]:
        start = self.root if start is None else start
        if start is None:
            return
        stack = [(start, False)]
        while stack:
            v, done = stack.pop()
            if done:
                yield v
                continue
            stack.append((v, True))
            for c in reversed(self.children[v]):
                stack.append((c, False))

    def leaves(self) -> List[int]:
        """Leaves from left to right."""
        return [v for v in self.preorder() if not self.children[v]]

    def subtree(self, v: int) -> "LabeledTree":
        """Copy of T(v), renumbered in preorder."""
        order = list(self.preorder(v))
        rank = {u: i for i, u in enumerate(order)}
        return LabeledTree([self.labels[u] for u in order],
                           [[rank[c] for c in self.children[u]] for u in order])

    def path_labels(self, v: int) -> List[Hashable]:
        """Labels on the root-to-v path."""
        out = []
        cur: Optional[int] = v
        while cur is not None:
            out.append(self.labels[cur])
            cur = self.parent[cur]
        out.reverse()
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabeledTree):
            return NotImplemented
        return serialize(self) == serialize(other)

    def __hash__(self) -> int:
        return hash(serialize(self))

    def __repr__(self) -> str:
        return f"LabeledTree({serialize(self)!r})" if self.labels else "LabeledTree()"


def _needs_quotes(label: str) -> bool:
    return not label or any(ch in _SPECIAL or ch.isspace() for ch in label)


def _format_label(label: Hashable) -> str:
    if label is BETA:
        raise PatmatError("the β sentinel cannot be serialized")
    text = str(label)
    if _needs_quotes(text):
        return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'
    return text


def serialize(t: LabeledTree) -> str:
    """Parenthesized text; parse_tree(serialize(t)) == t."""
    if t.root is None:
        return ""
    out: List[str] = []
    # entries: node id, or a literal string to emit
    stack: List[object] = [t.root]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        v = item
        out.append(_format_label(t.labels[v]))
        cs = t.children[v]
        if cs:
            out.append("(")
            stack.append(")")
            for i in range(len(cs) - 1, -1, -1):
                stack.append(cs[i])
                if i:
                    stack.append(",")
    return "".join(out)


def parse_tree(text: str) -> LabeledTree:
    """Parse `node := label | label '(' node (',' node)* ')'`.

    Raises TreeSyntaxError with the byte offset of the offending character.
    """
    n = len(text)

    def offset(i: int) -> int:
        return len(text[:i].encode("utf-8"))

    def skip_ws(i: int) -> int:
        while i < n and text[i].isspace():
            i += 1
        return i

    labels: List[str] = []
    children: List[List[int]] = []
    stack: List[int] = []
    i = skip_ws(0)
    if i >= n:
        raise TreeSyntaxError("empty tree text", offset(i))

    expect_node = True
    while True:
        i = skip_ws(i)
        if expect_node:
            if i >= n:
                raise TreeSyntaxError("expected a label, found end of input", offset(i))
            if labels and not stack:
                raise TreeSyntaxError("text continues after the root node", offset(i))
            if text[i] == '"':
                j = i + 1
                buf = []
                while j < n and text[j] != '"':
                    if text[j] == "\\":
                        j += 1
                        if j >= n:
                            break
                    buf.append(text[j])
                    j += 1
                if j >= n:
                    raise TreeSyntaxError("unterminated quoted label", offset(i))
                label = "".join(buf)
                j += 1
            else:
                j = i
                while j < n and text[j] not in _SPECIAL and not text[j].isspace():
                    j += 1
                if j == i:
                    raise TreeSyntaxError(f"expected a label, found {text[i]!r}", offset(i))
                label = text[i:j]
            v = len(labels)
            labels.append(label)
            children.append([])
            if stack:
                children[stack[-1]].append(v)
            i = skip_ws(j)
            if i < n and text[i] == "(":
                stack.append(v)
                i += 1
                continue
            expect_node = False
            continue

        if not stack:
            if i < n:
                raise TreeSyntaxError(f"unexpected {text[i]!r} after the root node", offset(i))
            break
        if i >= n:
            raise TreeSyntaxError("missing ')'", offset(i))
        if text[i] == ",":
            expect_node = True
            i += 1
        elif text[i] == ")":
            stack.pop()
            i += 1
        else:
            raise TreeSyntaxError(f"expected ',' or ')', found {text[i]!r}", offset(i))

    return LabeledTree(labels, children)


class TreeIndex:
    """Traversal numbering, depth, subtree size and an ancestor-doubling nca table."""

    def __init__(self, t: LabeledTree):
        self.tree = t
        n = t.size
        self.pre = [0] * n
        self.post = [0] * n
        self.depth = [0] * n
        self.size = [1] * n
        self.by_pre: List[int] = list(t.preorder())
        self.by_post: List[int] = list(t.postorder())
        for i, v in enumerate(self.by_pre):
            self.pre[v] = i
            p = t.parent[v]
            if p is not None:
                self.depth[v] = self.depth[p] + 1
        for i, v in enumerate(self.by_post):
            self.post[v] = i
            p = t.parent[v]
            if p is not None:
                self.size[p] += self.size[v]

        root = t.root if t.root is not None else 0
        self.up: List[List[int]] = [[t.parent[v] if t.parent[v] is not None else root for v in range(n)]]
        k = 1
        while (1 << k) < max(n, 2):
            prev = self.up[-1]
            self.up.append([prev[prev[v]] for v in range(n)])
            k += 1

    def is_ancestor(self, v: int, w: int) -> bool:
        """v is an ancestor of w (v == w counts)."""
        return self.pre[v] <= self.pre[w] and self.post[v] >= self.post[w]

    def is_proper_ancestor(self, v: int, w: int) -> bool:
        return v != w and self.is_ancestor(v, w)

    def left_of(self, v: int, w: int) -> bool:
        """v ⊲ w: v precedes w in both orders, so neither is an ancestor of the other."""
        return self.pre[v] < self.pre[w] and self.post[v] < self.post[w]

    def left_of_eq(self, v: int, w: int) -> bool:
        return v == w or self.left_of(v, w)

    def nca(self, v: int, w: int) -> int:
        if self.is_ancestor(v, w):
            return v
        if self.is_ancestor(w, v):
            return w
        for k in range(len(self.up) - 1, -1, -1):
            u = self.up[k][v]
            if not self.is_ancestor(u, w):
                v = u
        return self.up[0][v]


def build_index(t: LabeledTree) -> TreeIndex:
    return TreeIndex(t)


def deep(x: Sequence[int], ix: TreeIndex) -> List[int]:
    """Ordered antichain of the nodes in x that have no proper descendant in x.

    x must be semiordered; an order violation triggers a sort by preorder first.
    """
    if not x:
        return []
    out: List[int] = []
    cur = x[0]
    for v in x[1:]:
        if ix.left_of(cur, v):
            out.append(cur)
            cur = v
        elif ix.is_ancestor(cur, v):
            cur = v
        elif ix.is_ancestor(v, cur):
            continue
        else:
            return deep(sorted(set(x), key=ix.pre.__getitem__), ix)
    out.append(cur)
    return out
