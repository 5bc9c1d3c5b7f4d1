import itertools
import random

import pytest
from hypothesis import given, strategies as st

from bcod.bitio import (
    BitCursor,
    BitVector,
    BitWriter,
    append_bit,
    concat,
    from_bytes,
    reverse,
    to_bytes,
)
from bcod.errors import MalformedInputError, ReadPastEndError

bit_strings = st.text(alphabet="01", max_size=200).map(BitVector)


def all_vectors(max_len):
    for n in range(max_len + 1):
        for bits in itertools.product("01", repeat=n):
            yield BitVector("".join(bits))


def test_append_bit():
    assert append_bit(BitVector(""), 1) == BitVector("1")
    assert len(append_bit(BitVector(""), 1)) == 1
    assert append_bit(BitVector("10"), 0) == BitVector("100")
    v = append_bit(BitVector("1" * 7), 1)
    assert v == BitVector("1" * 8)
    assert to_bytes(v) == (b"\xff", 8)


def test_append_bit_rejects_non_bits():
    with pytest.raises(MalformedInputError):
        append_bit(BitVector(), 2)


@pytest.mark.parametrize("a, b, expected", [
    ("", "101", "101"),
    ("10", "0", "100"),
    ("1110", "0", "11100"),
])
def test_concat(a, b, expected):
    assert concat(BitVector(a), BitVector(b)) == BitVector(expected)


@pytest.mark.parametrize("v, expected", [("101", "101"), ("100", "001"), ("", "")])
def test_reverse(v, expected):
    assert reverse(BitVector(v)) == BitVector(expected)


@pytest.mark.parametrize("v, data, n", [
    ("10100000", b"\xa0", 8),
    ("101", b"\xa0", 3),
    ("", b"", 0),
])
def test_to_bytes(v, data, n):
    assert to_bytes(BitVector(v)) == (data, n)
    assert from_bytes(data, n) == BitVector(v)


@pytest.mark.parametrize("data, n", [
    (b"", 1),
    (b"\x00", 9),
    (b"\x00\x00", 8),   # a whole unused trailing byte
    (b"\x00", -1),
])
def test_from_bytes_rejects_inconsistent_length(data, n):
    with pytest.raises(MalformedInputError):
        from_bytes(data, n)


def test_pad_bits_never_surface():
    assert from_bytes(b"\xbf", 2) == BitVector("10")


def test_byte_round_trip_exhaustive_to_16():
    for v in all_vectors(16):
        assert from_bytes(*to_bytes(v)) == v


def test_byte_round_trip_random_long():
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randrange(0, 5000)
        v = BitVector("".join(rng.choice("01") for _ in range(n)))
        assert from_bytes(*to_bytes(v)) == v


@given(bit_strings)
def test_reverse_involution(v):
    assert reverse(reverse(v)) == v


@given(bit_strings, bit_strings)
def test_concat_length(a, b):
    assert len(concat(a, b)) == len(a) + len(b)


def test_constructor_validates():
    assert BitVector([1, 0, 1]) == BitVector("101")
    assert list(BitVector("0110")) == [0, 1, 1, 0]
    with pytest.raises(MalformedInputError):
        BitVector("012")


def test_cursor_reads_and_stops_at_end():
    c = BitCursor(BitVector("1011"))
    assert c.read_bit() == 1
    assert c.read(2) == BitVector("01")
    assert c.remaining == 1
    assert c.read_uint(1) == 1
    assert c.at_end()
    with pytest.raises(ReadPastEndError):
        c.read_bit()
    with pytest.raises(ReadPastEndError):
        c.read(1)
    assert c.position == 4


def test_writer_builds_vector():
    w = BitWriter()
    w.write_bit(1)
    w.write(BitVector("00"))
    w.write_uint(5, 3)
    assert len(w) == 6
    assert w.getvalue() == BitVector("100101")
    with pytest.raises(ValueError):
        w.write_uint(8, 3)
