"""
PMZL1 container
PMZL1 容器格式

    magic "PMZL1"
    scheme byte: 78 (ZL78) or 87 (ZLW)
    varint n, varint original length
    n × (varint reference [+ 1 label byte for ZL78])

Varints are unsigned LEB128. A ZL78 tail element is written with label byte 0;
the reader recognises it because the phrases then spell one byte more than
the recorded length.
"""
from __future__ import annotations

from typing import List, Optional, Tuple

from ..core.errors import CorruptContainerError
from ..utils.file_ops import write_bytes_atomic
from .codec import CompressedText, build_trie

MAGIC = b"PMZL1"
SCHEME_BYTES = {"zl78": 78, "zlw": 87}


def _put_varint(out: bytearray, value: int) -> None:
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return


def _get_varint(data: bytes, at: int, index: Optional[int]) -> Tuple[int, int]:
    value = shift = 0
    while True:
        if at >= len(data):
            raise CorruptContainerError("truncated varint", index)
        byte = data[at]
        at += 1
        value |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return value, at
        shift += 7


def encode_container(z: CompressedText) -> bytes:
    out = bytearray(MAGIC)
    out.append(SCHEME_BYTES[z.scheme])
    _put_varint(out, z.n)
    _put_varint(out, z.length)
    for r, a in z.elements():
        _put_varint(out, r)
        if z.scheme == "zl78":
            out.append(0 if a is None else a)
    return bytes(out)


def decode_container(data: bytes) -> CompressedText:
    """Parse and validate PMZL1 bytes / 解析并校验容器"""
    if not data.startswith(MAGIC):
        raise CorruptContainerError("bad magic, expected PMZL1")
    at = len(MAGIC)
    if at >= len(data):
        raise CorruptContainerError("missing scheme byte")
    schemes = {v: k for k, v in SCHEME_BYTES.items()}
    scheme = schemes.get(data[at])
    if scheme is None:
        raise CorruptContainerError(f"unknown scheme byte {data[at]}")
    at += 1
    n, at = _get_varint(data, at, None)
    length, at = _get_varint(data, at, None)
    refs: List[int] = []
    labels: List[Optional[int]] = []
    for i in range(1, n + 1):
        r, at = _get_varint(data, at, i)
        refs.append(r)
        if scheme == "zl78":
            if at >= len(data):
                raise CorruptContainerError("missing label byte", i)
            labels.append(data[at])
            at += 1
    if at != len(data):
        raise CorruptContainerError("trailing bytes after the last element")
    if scheme == "zl78" and n:
        labels = _mark_tail(refs, labels, length)
    z = CompressedText(scheme, tuple(refs), tuple(labels), length)
    build_trie(z)
    return z


def _mark_tail(refs: List[int], labels: List[Optional[int]], length: int) -> List[Optional[int]]:
    depth = [0]
    total = 0
    for i, r in enumerate(refs, 1):
        if r >= i:
            raise CorruptContainerError(f"reference {r} does not point backward", i)
        depth.append(depth[r] + 1)
        total += depth[-1]
    if total == length + 1:
        labels[-1] = None
    return labels


def save_container(z: CompressedText, path: str) -> None:
    write_bytes_atomic(path, encode_container(z))


def load_container(path: str) -> CompressedText:
    with open(path, "rb") as f:
        return decode_container(f.read())
