import random
from collections import deque

import pytest

from patmat.core.errors import CorruptContainerError
from patmat.zl import (
    CompressedText,
    ReferenceView,
    build_trie,
    compress,
    decode_container,
    decompress,
    encode_container,
    load_container,
    save_container,
    select_special,
)

ANANAS = b"ananasbananer"
ANANAS_REFS = (0, 0, 1, 1, 0, 3, 2, 0)
ANANAS_LABELS = tuple(b"annsbaer")


def _texts(rng):
    yield b""
    yield b"a"
    yield b"a" * 300
    yield bytes(range(256)) * 2
    yield b"ab" * 40 + b"ba" * 40
    for _ in range(60):
        alphabet = rng.choice((b"ab", b"acgt", bytes(range(256))))
        yield bytes(rng.choice(alphabet) for _ in range(rng.randint(0, 400)))


def test_zl78_reference_parse():
    z = compress("ananasbananer")
    assert z.refs == ANANAS_REFS
    assert z.labels == ANANAS_LABELS
    assert z.length == 13
    assert decompress(z) == ANANAS
    assert decompress(CompressedText("zl78", ANANAS_REFS, ANANAS_LABELS, 13)) == ANANAS


def test_empty_text():
    for scheme in ("zl78", "zlw"):
        z = compress(b"", scheme)
        assert z.n == 0
        assert decompress(z) == b""


def test_trailing_phrase_becomes_tail_element():
    z = compress(b"aaaa")
    assert z.refs == (0, 1, 1)
    assert z.labels == (ord("a"), ord("a"), None)
    assert z.has_tail
    assert decompress(z) == b"aaaa"
    trie = build_trie(z)
    assert trie.size == 3
    assert trie.element_nodes == [1, 2, 1]


@pytest.mark.parametrize("scheme", ["zl78", "zlw"])
def test_round_trip(scheme):
    rng = random.Random(1)
    for text in _texts(rng):
        z = compress(text, scheme)
        assert decompress(z) == text
        assert decode_container(encode_container(z)) == z


@pytest.mark.slow
@pytest.mark.parametrize("scheme", ["zl78", "zlw"])
def test_round_trip_large(scheme):
    rng = random.Random(2)
    text = bytes(rng.getrandbits(8) for _ in range(100_000))
    assert decompress(compress(text, scheme)) == text


def test_zl78_phrases_distinct_and_prefix_closed():
    rng = random.Random(3)
    for text in _texts(rng):
        z = compress(text)
        trie = build_trie(z)
        phrases = [trie.phrase(v) for v in range(trie.size)]
        assert len(set(phrases)) == trie.size
        known = set(phrases)
        assert all(p[:-1] in known for p in phrases if p)


def test_zlw_labels_come_from_next_phrase():
    rng = random.Random(4)
    for text in _texts(rng):
        z = compress(text, "zlw")
        trie = build_trie(z)
        assert trie.size == 257 + max(0, z.n - 1)
        nodes = trie.element_nodes
        for i in range(1, len(nodes)):
            new = 256 + i
            assert trie.parent[new] == nodes[i - 1]
            assert trie.label[new] == trie.phrase(nodes[i])[0]


def test_zlw_self_referencing_code():
    z = compress(b"aaaaaaa", "zlw")
    assert z.refs[1] == 256
    assert decompress(z) == b"aaaaaaa"


def test_trie_views():
    trie = build_trie(compress(ANANAS))
    assert trie.size == 9
    assert set(trie.children[0]) == set(b"anbr")
    assert trie.phrase(6) == b"ana"
    single = build_trie(compress(b"a"))
    assert single.size == 2 and single.children[0] == {ord("a"): 1}


@pytest.mark.parametrize("z, index", [
    (CompressedText("zl78", (0, 2), (97, 98), 2), 2),
    (CompressedText("zl78", (1,), (97,), 2), 1),
    (CompressedText("zl78", (0, 0), (97, 97), 2), 2),
    (CompressedText("zlw", (97, 300), (), 2), 2),
    (CompressedText("zlw", (256,), (), 1), 1),
])
def test_bad_references_name_the_element(z, index):
    with pytest.raises(CorruptContainerError) as err:
        decompress(z)
    assert err.value.index == index


def test_container_files(tmp_path):
    for scheme in ("zl78", "zlw"):
        z = compress(b"aaaa banana aaaa", scheme)
        path = tmp_path / f"text.{scheme}.pmzl"
        save_container(z, str(path))
        assert load_container(str(path)) == z
    with pytest.raises(CorruptContainerError) as err:
        decode_container(b"PMZL2" + encode_container(compress(ANANAS))[5:])
    assert err.value.index is None
    with pytest.raises(CorruptContainerError):
        decode_container(encode_container(compress(ANANAS))[:-1])
    data = bytearray(encode_container(compress(ANANAS)))
    data[5] = 99
    with pytest.raises(CorruptContainerError):
        decode_container(bytes(data))


def _distances_to_special(view, c):
    """Reference-path distance from every node to its nearest member, by BFS down the trie."""
    children = {v: [] for v in range(view.node_count + 1)}
    for v in range(1, view.node_count + 1):
        children[view.parent(v)].append(v)
    dist = {0: 0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w in children[v]:
            dist[w] = 0 if w in c else dist[v] + 1
            queue.append(w)
    return dist


def test_special_set_large_tau_keeps_only_root():
    z = compress(ANANAS)
    # deepest phrase "ana" sits 3 steps below z_0
    assert select_special(z, 3).members() == [0]
    assert select_special(z, 8).members() == [0]


def test_special_set_picks_midpoint_of_long_path():
    # path 6 -> 3 -> 1 -> z_0 reaches 2τ at τ = 2, so its τ-th node (element 3) joins
    assert select_special(compress(ANANAS), 2).members() == [0, 3]


def test_special_set_tau_one():
    z = compress(ANANAS)
    c = select_special(z, 1)
    view = ReferenceView(z)
    assert max(_distances_to_special(view, c).values()) <= 2
    assert len(c) == view.node_count + 1


@pytest.mark.parametrize("scheme", ["zl78", "zlw"])
def test_special_set_audit(scheme):
    rng = random.Random(5)
    for _ in range(40):
        text = bytes(rng.choice(b"ab") for _ in range(rng.randint(1, 3000)))
        z = compress(text, scheme)
        view = ReferenceView(z)
        for tau in (1, 2, 4, 8):
            c = select_special(view, tau)
            assert max(_distances_to_special(view, c).values()) <= 2 * tau
            assert len(c) <= 2 * view.node_count / tau + 1
            trie = view.trie or build_trie(z)
            assert all(c.depth[y] == trie.depth[y] for y in c.members())


def test_special_set_rejects_bad_tau():
    with pytest.raises(ValueError):
        select_special(compress(ANANAS), 0)
