"""
Ziv-Lempel codecs and the dictionary trie
Ziv-Lempel 编解码与字典树

ZL78 elements are (reference, label) pairs; node i of the dictionary is the
phrase of element i, and node 0 is the empty phrase. Input that ends inside an
existing phrase is emitted as a final tail element (reference, None) whose
phrase is the phrase of its reference.

ZLW elements are codes only. The dictionary starts with the 256 single bytes
(code b, node b+1); element i (1 ≤ i < n) defines code 255+i, node 256+i,
whose label is the first byte of the next phrase.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple, Union

from ..core.errors import CorruptContainerError, PatmatError

SCHEMES = ("zl78", "zlw")
ZLW_SEED = 256


@dataclass(frozen=True)
class CompressedText:
    scheme: str
    refs: Tuple[int, ...]
    labels: Tuple[Optional[int], ...] = ()  # ZL78 only; None marks the tail
    length: int = 0  # length of the source text

    @property
    def n(self) -> int:
        return len(self.refs)

    @property
    def has_tail(self) -> bool:
        return self.scheme == "zl78" and bool(self.labels) and self.labels[-1] is None

    def elements(self) -> Iterator[Tuple[int, Optional[int]]]:
        if self.scheme == "zl78":
            return zip(self.refs, self.labels)
        return ((r, None) for r in self.refs)


def _as_bytes(q: Union[str, bytes]) -> bytes:
    return q.encode("utf-8") if isinstance(q, str) else bytes(q)


def compress(q: Union[str, bytes], scheme: str = "zl78") -> CompressedText:
    """Greedy parse of q into compression elements / 贪心分解压缩"""
    q = _as_bytes(q)
    if scheme == "zl78":
        return _compress_zl78(q)
    if scheme == "zlw":
        return _compress_zlw(q)
    raise PatmatError(f"unknown scheme {scheme!r}, expected one of {SCHEMES}")


def _compress_zl78(q: bytes) -> CompressedText:
    child: Dict[Tuple[int, int], int] = {}
    refs: List[int] = []
    labels: List[Optional[int]] = []
    j = 0
    while j < len(q):
        node = 0
        while j < len(q) and (node, q[j]) in child:
            node = child[(node, q[j])]
            j += 1
        if j == len(q):
            refs.append(node)
            labels.append(None)
            break
        refs.append(node)
        labels.append(q[j])
        child[(node, q[j])] = len(refs)
        j += 1
    return CompressedText("zl78", tuple(refs), tuple(labels), len(q))


def _compress_zlw(q: bytes) -> CompressedText:
    codes: Dict[bytes, int] = {bytes([b]): b for b in range(ZLW_SEED)}
    refs: List[int] = []
    w = b""
    for b in q:
        wb = w + bytes([b])
        if wb in codes:
            w = wb
            continue
        refs.append(codes[w])
        codes[wb] = len(codes)
        w = bytes([b])
    if w:
        refs.append(codes[w])
    return CompressedText("zlw", tuple(refs), (), len(q))


@dataclass
class DictTrie:
    """Explicit dictionary trie; node 0 is the empty phrase."""
    parent: List[int] = field(default_factory=lambda: [0])
    label: List[Optional[int]] = field(default_factory=lambda: [None])
    depth: List[int] = field(default_factory=lambda: [0])
    children: List[Dict[int, int]] = field(default_factory=lambda: [{}])
    element_nodes: List[int] = field(default_factory=list)  # node of z_1..z_n

    @property
    def size(self) -> int:
        return len(self.parent)

    def add(self, parent: int, label: int) -> int:
        v = len(self.parent)
        self.parent.append(parent)
        self.label.append(label)
        self.depth.append(self.depth[parent] + 1)
        self.children.append({})
        self.children[parent][label] = v
        return v

    def phrase(self, v: int) -> bytes:
        out = bytearray()
        while v:
            out.append(self.label[v])
            v = self.parent[v]
        out.reverse()
        return bytes(out)

    def first_byte(self, v: int) -> int:
        while self.parent[v]:
            v = self.parent[v]
        return self.label[v]


def build_trie(z: CompressedText) -> DictTrie:
    """
    Dictionary trie of z; raises CorruptContainerError on bad references.
    构建字典树
    """
    trie = DictTrie()
    if z.scheme == "zl78":
        for i, (r, a) in enumerate(z.elements(), 1):
            if not 0 <= r < trie.size:
                raise CorruptContainerError(f"reference {r} does not point backward", i)
            if a is None:
                if i != z.n:
                    raise CorruptContainerError("tail marker before the last element", i)
                trie.element_nodes.append(r)
                continue
            if a in trie.children[r]:
                raise CorruptContainerError("phrase repeats an existing phrase", i)
            trie.element_nodes.append(trie.add(r, a))
    elif z.scheme == "zlw":
        for b in range(ZLW_SEED):
            trie.add(0, b)
        prev: Optional[int] = None
        for i, code in enumerate(z.refs, 1):
            node = code + 1
            if node > trie.size or (node == trie.size and prev is None):
                raise CorruptContainerError(f"code {code} is not yet defined", i)
            if prev is not None:
                # code naming the node being defined: its first byte is prev's
                first = trie.first_byte(prev if node == trie.size else node)
                if first in trie.children[prev]:
                    raise CorruptContainerError("dictionary entry repeats an existing phrase", i)
                trie.add(prev, first)
            trie.element_nodes.append(node)
            prev = node
    else:
        raise CorruptContainerError(f"unknown scheme {z.scheme!r}")
    total = sum(trie.depth[v] for v in trie.element_nodes)
    if total != z.length:
        raise CorruptContainerError(f"phrases spell {total} bytes, header says {z.length}")
    return trie


def decompress(z: CompressedText) -> bytes:
    """Concatenated phrases; round-trips compress for both schemes."""
    trie = build_trie(z)
    out = bytearray()
    for v in trie.element_nodes:
        out += trie.phrase(v)
    return bytes(out)


class ReferenceView:
    """
    Parent/label access to the dictionary without copying ZL78 elements.
    ZLW needs the explicit trie to recover labels.
    """

    def __init__(self, z: CompressedText, trie: Optional[DictTrie] = None):
        self.z = z
        self.trie = trie
        if z.scheme == "zlw" and trie is None:
            self.trie = build_trie(z)
        if self.trie is not None:
            self.node_count = self.trie.size - 1
        else:
            self.node_count = z.n - (1 if z.has_tail else 0)

    def parent(self, v: int) -> int:
        if self.trie is not None:
            return self.trie.parent[v]
        return self.z.refs[v - 1]

    def label(self, v: int) -> int:
        if self.trie is not None:
            return self.trie.label[v]
        return self.z.labels[v - 1]

    def element_node(self, i: int) -> int:
        """Node whose phrase is phrase(z_i), 1-based."""
        if self.trie is not None:
            return self.trie.element_nodes[i - 1]
        if i == self.z.n and self.z.has_tail:
            return self.z.refs[i - 1]
        return i

    def path_labels(self, v: int, count: int) -> List[int]:
        """Labels of up to count edges from v towards the root, deepest first."""
        out = []
        while v and len(out) < count:
            out.append(self.label(v))
            v = self.parent(v)
        return out

    def ancestor(self, v: int, steps: int) -> int:
        for _ in range(steps):
            v = self.parent(v)
        return v


@dataclass
class SpecialSet:
    tau: int
    depth: Dict[int, int] = field(default_factory=lambda: {0: 0})  # member -> phrase length

    def __contains__(self, v: int) -> bool:
        return v in self.depth

    def __len__(self) -> int:
        return len(self.depth)

    def members(self) -> List[int]:
        return sorted(self.depth)

    def nearest(self, view: ReferenceView, v: int) -> Tuple[int, List[int]]:
        """Nearest member on the reference path of v, and the path from v up to it (exclusive)."""
        path = []
        while v not in self.depth:
            path.append(v)
            v = view.parent(v)
        return v, path


def select_special(z: Union[CompressedText, ReferenceView], tau: int) -> SpecialSet:
    """
    τ-spaced special elements: every dictionary node ends up within 2τ
    reference steps of a member, and z_0 is always a member.
    选择特殊压缩元素
    """
    if tau < 1:
        raise PatmatError(f"tau must be >= 1, got {tau}")
    view = z if isinstance(z, ReferenceView) else ReferenceView(z)
    c = SpecialSet(tau)
    for v in range(1, view.node_count + 1):
        y, path = c.nearest(view, v)
        if len(path) + 1 < 2 * tau:
            continue
        chosen = path[tau - 1]
        c.depth[chosen] = c.depth[y] + len(path) - (tau - 1)
    return c
