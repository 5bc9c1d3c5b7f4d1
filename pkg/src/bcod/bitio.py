"""Exact-length bit vectors, cursors and a small builder.

Bits are held as a ``str`` of ``'0'``/``'1'`` characters. That keeps
splitting, joining and regex matching in C, which is where nearly all the
time goes for megabit inputs. Byte packing is MSB-first; the final partial
byte is zero padded and the real length always travels separately.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Union

from .errors import MalformedInputError, ReadPastEndError

MAX_BITS = (1 << 64) - 1

_BIT_CHARS = frozenset("01")


class BitVector:
    """Immutable, exact-length sequence of bits."""

    __slots__ = ("_bits",)

    def __init__(self, bits: Union[str, Iterable[int], "BitVector"] = ""):
        if isinstance(bits, BitVector):
            s = bits._bits
        elif isinstance(bits, str):
            if not _BIT_CHARS.issuperset(bits):
                raise MalformedInputError(f"not a bit string: {bits[:32]!r}")
            s = bits
        else:
            chunks = []
            for b in bits:
                if b not in (0, 1):
                    raise MalformedInputError(f"not a bit: {b!r}")
                chunks.append("1" if b else "0")
            s = "".join(chunks)
        self._bits = s

    @classmethod
    def _trusted(cls, s: str) -> "BitVector":
        # caller guarantees s is made of '0'/'1' only
        v = object.__new__(cls)
        v._bits = s
        return v

    @property
    def bits(self) -> str:
        return self._bits

    def __len__(self) -> int:
        return len(self._bits)

    def __iter__(self) -> Iterator[int]:
        return (1 if c == "1" else 0 for c in self._bits)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return BitVector._trusted(self._bits[index])
        return 1 if self._bits[index] == "1" else 0

    def __add__(self, other: "BitVector") -> "BitVector":
        if not isinstance(other, BitVector):
            return NotImplemented
        return BitVector._trusted(self._bits + other._bits)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, BitVector):
            return self._bits == other._bits
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("BitVector", self._bits))

    def __str__(self) -> str:
        return self._bits

    def __repr__(self) -> str:
        if len(self._bits) > 64:
            return f"BitVector('{self._bits[:64]}...', length={len(self._bits)})"
        return f"BitVector('{self._bits}')"

    def count(self, bit: int = 1) -> int:
        return self._bits.count("1" if bit else "0")


def append_bit(v: BitVector, b: int) -> BitVector:
    if b not in (0, 1):
        raise MalformedInputError(f"not a bit: {b!r}")
    return BitVector._trusted(v.bits + ("1" if b else "0"))


def concat(a: BitVector, b: BitVector) -> BitVector:
    return a + b


def reverse(v: BitVector) -> BitVector:
    return BitVector._trusted(v.bits[::-1])


def to_bytes(v: BitVector) -> tuple[bytes, int]:
    """Pack MSB-first, zero padding the last byte. Returns ``(data, bit_length)``."""
    n = len(v)
    if n == 0:
        return b"", 0
    nbytes = (n + 7) // 8
    pad = nbytes * 8 - n
    return (int(v.bits, 2) << pad).to_bytes(nbytes, "big"), n


def from_bytes(data: bytes, bit_length: int) -> BitVector:
    nbytes = len(data)
    if bit_length < 0 or bit_length > 8 * nbytes:
        raise MalformedInputError(
            f"bit length {bit_length} does not fit in {nbytes} bytes")
    if nbytes and bit_length <= 8 * (nbytes - 1):
        raise MalformedInputError(
            f"bit length {bit_length} leaves trailing unused bytes in {nbytes} bytes")
    if nbytes == 0:
        return BitVector()
    s = format(int.from_bytes(data, "big"), f"0{8 * nbytes}b")
    return BitVector._trusted(s[:bit_length])


class BitCursor:
    """Read position over a BitVector. Reading past the end raises."""

    __slots__ = ("target", "position")

    def __init__(self, target: BitVector, position: int = 0):
        if not 0 <= position <= len(target):
            raise ReadPastEndError(f"position {position} outside 0..{len(target)}")
        self.target = target
        self.position = position

    @property
    def remaining(self) -> int:
        return len(self.target) - self.position

    def at_end(self) -> bool:
        return self.position == len(self.target)

    def read_bit(self) -> int:
        if self.position >= len(self.target):
            raise ReadPastEndError("read past end of bit vector")
        bit = self.target[self.position]
        self.position += 1
        return bit

    def peek(self, n: int) -> BitVector:
        if n < 0 or n > self.remaining:
            raise ReadPastEndError(f"cannot peek {n} bits, {self.remaining} left")
        return self.target[self.position:self.position + n]

    def read(self, n: int) -> BitVector:
        out = self.peek(n)
        self.position += n
        return out

    def read_uint(self, n: int) -> int:
        chunk = self.read(n)
        return int(chunk.bits, 2) if n else 0


class BitWriter:
    """Append-only builder; the single owner calls ``getvalue`` when done."""

    __slots__ = ("_chunks", "_length")

    def __init__(self) -> None:
        self._chunks: list[str] = []
        self._length = 0

    def __len__(self) -> int:
        return self._length

    def write_bit(self, b: int) -> None:
        self._chunks.append("1" if b else "0")
        self._length += 1

    def write(self, v: BitVector) -> None:
        self._chunks.append(v.bits)
        self._length += len(v)

    def write_uint(self, value: int, n: int) -> None:
        if value < 0 or value >> n:
            raise ValueError(f"{value} does not fit in {n} bits")
        if n:
            self._chunks.append(format(value, f"0{n}b"))
            self._length += n

    def getvalue(self) -> BitVector:
        return BitVector._trusted("".join(self._chunks))
