"""
Subsequence index
子序列索引

The text is cut into blocks of σ positions (σ = number of distinct symbols).
A query walks P left to right keeping the last matched position: the next
occurrence of a symbol is looked up inside the current block with a binary
search on that symbol's position list, and otherwise taken from the block's
long-jump table (the first occurrence after the block).

PMSQ1 container, little-endian:
    magic "PMSQ1", u32 n, u32 σ, σ symbol bytes, u32 block size, u32 block count,
    jump table (block count × σ u32, 0xFFFFFFFF = none),
    per symbol: u32 count, count × u32 positions,
    offset table (block count × σ u32: index of the first position ≥ block start)
"""
from __future__ import annotations

import struct
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Union

from ..core.errors import CorruptContainerError
from ..utils.file_ops import write_bytes_atomic

MAGIC = b"PMSQ1"
NONE = 0xFFFFFFFF


@dataclass
class QueryStats:
    block_searches: int = 0
    long_jumps: int = 0


@dataclass
class SubseqIndex:
    n: int
    symbols: List[int]
    block: int
    positions: Dict[int, List[int]] = field(default_factory=dict)  # 1-based, increasing
    jump: List[List[Optional[int]]] = field(default_factory=list)  # [block][symbol rank]
    offsets: List[List[int]] = field(default_factory=list)

    @property
    def sigma(self) -> int:
        return len(self.symbols)

    @property
    def nblocks(self) -> int:
        return len(self.jump)

    def block_of(self, pos: int) -> int:
        return (pos - 1) // self.block


def build_index(t: Union[str, bytes]) -> SubseqIndex:
    if isinstance(t, str):
        t = t.encode("utf-8")
    n = len(t)
    symbols = sorted(set(t))
    block = max(len(symbols), 1)
    ix = SubseqIndex(n, symbols, block)
    for sym in symbols:
        ix.positions[sym] = []
    for pos, sym in enumerate(t, 1):
        ix.positions[sym].append(pos)
    nblocks = -(-n // block)
    nxt: List[Optional[int]] = [None] * len(symbols)
    rank = {sym: r for r, sym in enumerate(symbols)}
    jump: List[List[Optional[int]]] = [[] for _ in range(nblocks)]
    for b in range(nblocks - 1, -1, -1):
        jump[b] = list(nxt)
        for pos in range(min(n, (b + 1) * block), b * block, -1):
            nxt[rank[t[pos - 1]]] = pos
    ix.jump = jump
    ix.offsets = [[bisect_left(ix.positions[sym], b * block + 1) for sym in symbols]
                  for b in range(nblocks)]
    return ix


def is_subsequence(ix: SubseqIndex, p: Union[str, bytes], stats: Optional[QueryStats] = None) -> bool:
    """Greedy leftmost embedding of p into the indexed text."""
    if isinstance(p, str):
        p = p.encode("utf-8")
    stats = stats if stats is not None else QueryStats()
    rank = {sym: r for r, sym in enumerate(ix.symbols)}
    cur = 0
    for sym in p:
        r = rank.get(sym)
        if r is None or cur >= ix.n:
            return False
        b = ix.block_of(cur + 1)
        lst = ix.positions[sym]
        lo = ix.offsets[b][r]
        hi = ix.offsets[b + 1][r] if b + 1 < ix.nblocks else len(lst)
        stats.block_searches += 1
        k = bisect_right(lst, cur, lo, hi)
        if k < hi:
            cur = lst[k]
            continue
        stats.long_jumps += 1
        nxt = ix.jump[b][r]
        if nxt is None:
            return False
        cur = nxt
    return True


def encode_index(ix: SubseqIndex) -> bytes:
    out = bytearray(MAGIC)
    out += struct.pack("<II", ix.n, ix.sigma)
    out += bytes(ix.symbols)
    out += struct.pack("<II", ix.block, ix.nblocks)
    for row in ix.jump:
        out += struct.pack(f"<{ix.sigma}I", *(NONE if v is None else v for v in row))
    for sym in ix.symbols:
        lst = ix.positions[sym]
        out += struct.pack(f"<I{len(lst)}I", len(lst), *lst)
    for row in ix.offsets:
        out += struct.pack(f"<{ix.sigma}I", *row)
    return bytes(out)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.at = 0

    def take(self, count: int, index: Optional[int] = None) -> List[int]:
        end = self.at + 4 * count
        if end > len(self.data):
            raise CorruptContainerError("truncated subsequence index", index)
        values = list(struct.unpack_from(f"<{count}I", self.data, self.at))
        self.at = end
        return values


def decode_index(data: bytes) -> SubseqIndex:
    """Parse and validate a PMSQ1 container."""
    if not data.startswith(MAGIC):
        raise CorruptContainerError("bad magic, expected PMSQ1")
    rd = _Reader(data)
    rd.at = len(MAGIC)
    n, sigma = rd.take(2)
    if rd.at + sigma > len(data):
        raise CorruptContainerError("truncated symbol table")
    symbols = list(data[rd.at:rd.at + sigma])
    rd.at += sigma
    if symbols != sorted(set(symbols)):
        raise CorruptContainerError("symbols not strictly increasing")
    block, nblocks = rd.take(2)
    if block != max(sigma, 1) or nblocks != -(-n // block):
        raise CorruptContainerError("block layout does not match n and σ")
    ix = SubseqIndex(n, symbols, block)
    for _ in range(nblocks):
        ix.jump.append([None if v == NONE else v for v in rd.take(sigma)])
    total = 0
    for r, sym in enumerate(symbols):
        (count,) = rd.take(1, r)
        lst = rd.take(count, r)
        if any(not 1 <= v <= n for v in lst) or any(a >= b for a, b in zip(lst, lst[1:])):
            raise CorruptContainerError("position list not increasing within 1..n", r)
        ix.positions[sym] = lst
        total += count
    if total != n:
        raise CorruptContainerError("position lists do not cover the text")
    for b in range(nblocks):
        ix.offsets.append(rd.take(sigma, b))
    if rd.at != len(data):
        raise CorruptContainerError("trailing bytes after offset table")
    _check_tables(ix)
    return ix


def _check_tables(ix: SubseqIndex) -> None:
    """Jump and offset entries must agree with the position lists, block by block."""
    for b in range(ix.nblocks):
        start, end = b * ix.block + 1, (b + 1) * ix.block
        for r, sym in enumerate(ix.symbols):
            lst = ix.positions[sym]
            k = bisect_right(lst, end)
            if ix.jump[b][r] != (lst[k] if k < len(lst) else None):
                raise CorruptContainerError(f"jump entry of block {b} for symbol {sym} is not its next occurrence", b)
            if ix.offsets[b][r] != bisect_left(lst, start):
                raise CorruptContainerError(f"offset entry of block {b} for symbol {sym} out of place", b)


def save_index(ix: SubseqIndex, path: str) -> None:
    write_bytes_atomic(path, encode_index(ix))


def load_index(path: str) -> SubseqIndex:
    with open(path, "rb") as f:
        return decode_index(f.read())
