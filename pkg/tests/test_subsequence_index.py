import random
import struct

import pytest

from patmat.core.errors import CorruptContainerError
from patmat.strings import (
    QueryStats,
    build_index,
    decode_index,
    encode_index,
    is_subsequence,
    load_index,
    save_index,
)

from conftest import is_subsequence as two_pointer


def test_empty_text():
    ix = build_index(b"")
    assert ix.nblocks == 0
    assert is_subsequence(ix, b"")
    assert not is_subsequence(ix, b"a")


def test_single_block_example():
    ix = build_index("acb")
    assert ix.symbols == [ord("a"), ord("b"), ord("c")]
    assert ix.block == 3 and ix.nblocks == 1
    assert ix.positions[ord("b")] == [3]
    assert is_subsequence(ix, "ab")
    assert not is_subsequence(ix, "ba")
    assert not is_subsequence(ix, "abc")


def test_jump_tables_against_scan():
    rng = random.Random(1)
    for _ in range(100):
        t = bytes(rng.choice(b"abcde") for _ in range(rng.randint(1, 200)))
        ix = build_index(t)
        for b in range(ix.nblocks):
            end = min(len(t), (b + 1) * ix.block)
            for r, sym in enumerate(ix.symbols):
                later = [p for p in range(end + 1, len(t) + 1) if t[p - 1] == sym]
                assert ix.jump[b][r] == (later[0] if later else None)
        for sym, positions in ix.positions.items():
            assert positions == [p for p in range(1, len(t) + 1) if t[p - 1] == sym]


def test_queries_against_two_pointer_scan():
    rng = random.Random(2)
    for _ in range(2000):
        alphabet = b"abcdefgh"[:rng.randint(1, 8)]
        t = bytes(rng.choice(alphabet) for _ in range(rng.randint(0, 60)))
        p = bytes(rng.choice(alphabet) for _ in range(rng.randint(0, 8)))
        assert is_subsequence(build_index(t), p) == two_pointer(p, t), (p, t)


def test_query_cost_is_bounded_by_pattern_length():
    rng = random.Random(3)
    t = bytes(rng.choice(b"abcd") for _ in range(500))
    ix = build_index(t)
    for _ in range(100):
        p = bytes(rng.choice(b"abcd") for _ in range(rng.randint(1, 40)))
        stats = QueryStats()
        is_subsequence(ix, p, stats)
        assert stats.block_searches <= len(p)
        assert stats.long_jumps <= len(p)


def test_container_round_trip(tmp_path):
    rng = random.Random(4)
    t = bytes(rng.choice(b"xyz") for _ in range(300))
    ix = build_index(t)
    path = tmp_path / "text.pmsq"
    save_index(ix, str(path))
    again = load_index(str(path))
    assert again == ix
    for _ in range(50):
        p = bytes(rng.choice(b"xyz") for _ in range(rng.randint(0, 30)))
        assert is_subsequence(again, p) == two_pointer(p, t)


@pytest.mark.parametrize("mutate", [
    lambda data: b"XXXXX" + data[5:],
    lambda data: data[:-3],
    lambda data: data + b"\x00",
    lambda data: data[:18] + b"\x09" + data[19:],
])
def test_container_rejects_corrupt_data(mutate):
    data = encode_index(build_index(b"abracadabra"))
    with pytest.raises(CorruptContainerError):
        decode_index(mutate(data))


def _patch_u32(data, at, value):
    return data[:at] + struct.pack("<I", value) + data[at + 4:]


def test_container_rejects_tables_that_disagree_with_positions():
    ix = build_index(b"abracadabra")
    data = encode_index(ix)
    assert (ix.block, ix.nblocks, ix.sigma) == (5, 3, 5)
    jump_at = len(b"PMSQ1") + 8 + ix.sigma + 8
    offsets_at = len(data) - 4 * ix.nblocks * ix.sigma
    # block 1 ends at position 10; the next 'a' is at 11
    assert ix.jump[1][0] == 11
    for at, value, block in [
        (jump_at + 4 * (1 * ix.sigma + 0), 2, 1),
        (jump_at + 4 * (1 * ix.sigma + 0), 10**6, 1),
        (offsets_at + 4 * (2 * ix.sigma + 1), 99, 2),
    ]:
        with pytest.raises(CorruptContainerError) as err:
            decode_index(_patch_u32(data, at, value))
        assert err.value.index == block
