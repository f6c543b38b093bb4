"""
Bit-string helpers over Python ints / 基于 Python 整数的位串工具

Python ints carry arbitrary-width shifts, and/or and subtraction with carry, so
a bit string is just an int. These helpers cover the structured constants of
the bit-parallel closure and their shift-only multiplication.
"""
from typing import Iterator


def ones(width: int) -> int:
    return (1 << width) - 1


def repeat_bits(stride: int, count: int, offset: int = 0) -> int:
    """One bit at offset + i*stride for i in range(count)."""
    out = 0
    for i in range(count):
        out |= 1 << (offset + i * stride)
    return out


def mul_structured(s: int, stride: int, count: int) -> int:
    """s * repeat_bits(stride, count) as a sum of shifted copies."""
    out = 0
    for i in range(count):
        out += s << (i * stride)
    return out


def set_bits(x: int) -> Iterator[int]:
    """Positions of the set bits of x, lowest first."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def to_str(x: int, width: int) -> str:
    """Most significant bit first, e.g. to_str(5, 4) == '0101'."""
    return format(x & ones(width), f"0{width}b") if width else ""
