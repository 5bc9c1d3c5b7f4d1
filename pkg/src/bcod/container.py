"""Self-describing archive: mode, code table, residue and payload.

On-disk layout (``.bcod``), integers as unsigned LEB128 varints::

    "BCOD"  version=0x01  mode
    entry_count  entries...
    residue_len  payload_bits  payload bytes (MSB-first, zero padded)

Entries per mode: huffman ``k, code_length``; shannon ``k, count``;
symmetric ``k`` in rank order; raw has none.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Union

from . import coders
from .bitio import BitVector, from_bytes, to_bytes
from .errors import (
    BadMagicError,
    CorruptArchiveError,
    DecodeError,
    UnknownModeError,
    UnknownVersionError,
    VarintOverflowError,
)
from .model import FrequencyTable, count
from .tokenizer import detokenize, token_str, tokenize

MAGIC = b"BCOD"
VERSION = 1
_MAX_VARINT_BYTES = 10


class Mode(enum.IntEnum):
    HUFFMAN = 0
    SYMMETRIC = 1
    SHANNON = 2
    RAW = 3

    @classmethod
    def parse(cls, value: Union["Mode", str, int]) -> "Mode":
        if isinstance(value, cls):
            return value
        if isinstance(value, str):
            try:
                return cls[value.upper()]
            except KeyError:
                raise ValueError(f"unknown mode {value!r}") from None
        return cls(value)

    @property
    def label(self) -> str:
        return self.name.lower()


@dataclass(frozen=True)
class Archive:
    mode: Mode
    table: tuple[tuple[int, ...], ...] = ()
    residue_len: int = 0
    payload_bits: int = 0
    payload: BitVector = field(default_factory=BitVector)

    @property
    def ratio_bits(self) -> int:
        """Payload plus the verbatim residue, the size compared against the input."""
        return self.payload_bits + self.residue_len


def _table_for(mode: Mode, t: FrequencyTable, book: coders.CodeBook) -> tuple:
    if mode is Mode.HUFFMAN:
        return tuple((k, len(book[k])) for k in sorted(book.entries))
    if mode is Mode.SHANNON:
        return tuple((k, n) for k, n in t.counts.items())
    # symmetric: rank order is codeword length order
    return tuple((k,) for k, _ in sorted(book.lengths().items(), key=lambda kv: kv[1]))


def compress(v: BitVector, mode: Union[Mode, str] = Mode.HUFFMAN) -> Archive:
    mode = Mode.parse(mode)
    if mode is Mode.RAW:
        return Archive(mode, (), 0, len(v), v)
    stream = tokenize(v)
    table = count(stream)
    if table.total == 0:
        return Archive(mode, (), stream.residue, 0, BitVector())
    book = coders.build(mode.label, table)
    payload = coders.encode(stream, book)
    return Archive(mode, _table_for(mode, table, book), stream.residue, len(payload), payload)


def _distinct_classes(table, arity: int) -> list[int]:
    ks = []
    for entry in table:
        if len(entry) != arity:
            raise CorruptArchiveError("table", f"entry {entry!r} should have {arity} field(s)")
        if entry[0] < 1:
            raise CorruptArchiveError("table", f"token class {entry[0]} < 1")
        ks.append(entry[0])
    if len(set(ks)) != len(ks):
        raise CorruptArchiveError("table", "duplicate token class")
    return ks


def book_from_table(mode: Mode, table) -> coders.CodeBook:
    """Rebuild the exact codebook the encoder used."""
    if mode is Mode.HUFFMAN:
        _distinct_classes(table, 2)
        try:
            return coders.book_from_lengths({k: n for k, n in table})
        except ValueError as exc:
            raise CorruptArchiveError("table", str(exc)) from None
    if mode is Mode.SHANNON:
        _distinct_classes(table, 2)
        if any(n < 1 for _, n in table):
            raise CorruptArchiveError("table", "shannon count < 1")
        return coders.build_shannon(FrequencyTable({k: n for k, n in table}))
    if mode is Mode.SYMMETRIC:
        return coders.symmetric_from_ranking(_distinct_classes(table, 1))
    raise CorruptArchiveError("header", f"mode {mode!r} has no codebook")


def decompress(a: Archive) -> BitVector:
    if a.payload_bits != len(a.payload):
        raise CorruptArchiveError(
            "payload", f"header says {a.payload_bits} bits, payload holds {len(a.payload)}")
    mode = Mode.parse(a.mode)
    if mode is Mode.RAW:
        if a.table:
            raise CorruptArchiveError("table", "raw archive carries a code table")
        if a.residue_len:
            raise CorruptArchiveError("residue", "raw archive carries a residue")
        return a.payload
    if not a.table:
        if a.payload_bits:
            raise CorruptArchiveError("table", "empty code table with a non-empty payload")
        return detokenize((), a.residue_len)
    book = book_from_table(mode, a.table)
    matcher = book._forward
    # map codewords straight to run patterns; same parse as coders.decode
    runs = {w: token_str(k) for w, k in matcher.inverse.items()}
    try:
        pieces = matcher.parse(a.payload.bits, runs)
    except DecodeError as exc:
        raise CorruptArchiveError("payload", str(exc)) from None
    return BitVector._trusted("".join(pieces) + "1" * a.residue_len)


# -- byte format -------------------------------------------------------------

def encode_varint(value: int) -> bytes:
    if value < 0 or value >> 64:
        raise VarintOverflowError(f"{value} is not an unsigned 64-bit integer")
    out = bytearray()
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def decode_varint(data: bytes, pos: int, section: str) -> tuple[int, int]:
    """Read a varint at ``pos``; returns ``(value, next_pos)``."""
    value = 0
    for i in range(_MAX_VARINT_BYTES):
        if pos + i >= len(data):
            raise CorruptArchiveError(section, "truncated varint")
        byte = data[pos + i]
        value |= (byte & 0x7F) << (7 * i)
        if not byte & 0x80:
            if value >> 64:
                raise VarintOverflowError(f"varint in {section} exceeds 64 bits")
            return value, pos + i + 1
    raise VarintOverflowError(f"varint in {section} longer than {_MAX_VARINT_BYTES} bytes")


def pack_table(mode: Mode, table) -> bytes:
    out = bytearray(encode_varint(len(table)))
    for entry in table:
        for value in entry:
            out += encode_varint(value)
    return bytes(out)


def pack(a: Archive) -> bytes:
    mode = Mode.parse(a.mode)
    data, nbits = to_bytes(a.payload)
    if nbits != a.payload_bits:
        raise CorruptArchiveError("payload", "payload_bits does not match payload length")
    return b"".join([
        MAGIC,
        bytes([VERSION, int(mode)]),
        pack_table(mode, a.table),
        encode_varint(a.residue_len),
        encode_varint(a.payload_bits),
        data,
    ])


_ARITY = {Mode.HUFFMAN: 2, Mode.SHANNON: 2, Mode.SYMMETRIC: 1, Mode.RAW: 0}


def unpack(data: bytes) -> Archive:
    if len(data) < len(MAGIC) or data[:len(MAGIC)] != MAGIC:
        raise BadMagicError(f"bad magic {bytes(data[:4])!r}, expected {MAGIC!r}")
    pos = len(MAGIC)
    if pos >= len(data):
        raise CorruptArchiveError("header", "missing version byte")
    if data[pos] != VERSION:
        raise UnknownVersionError(f"unsupported version {data[pos]}")
    pos += 1
    if pos >= len(data):
        raise CorruptArchiveError("header", "missing mode byte")
    try:
        mode = Mode(data[pos])
    except ValueError:
        raise UnknownModeError(f"unknown mode byte {data[pos]}") from None
    pos += 1

    n_entries, pos = decode_varint(data, pos, "table")
    arity = _ARITY[mode]
    if mode is Mode.RAW and n_entries:
        raise CorruptArchiveError("table", "raw archive carries a code table")
    if n_entries > len(data):
        raise CorruptArchiveError("table", f"entry count {n_entries} exceeds archive size")
    table = []
    for _ in range(n_entries):
        entry = []
        for _ in range(arity):
            value, pos = decode_varint(data, pos, "table")
            entry.append(value)
        table.append(tuple(entry))

    residue_len, pos = decode_varint(data, pos, "residue")
    payload_bits, pos = decode_varint(data, pos, "payload")
    nbytes = (payload_bits + 7) // 8
    body = data[pos:]
    if len(body) < nbytes:
        raise CorruptArchiveError(
            "payload", f"truncated: need {nbytes} bytes, found {len(body)}")
    if len(body) > nbytes:
        raise CorruptArchiveError(
            "payload", f"{len(body) - nbytes} unexpected trailing byte(s)")
    payload = from_bytes(bytes(body), payload_bits)
    return Archive(mode, tuple(table), residue_len, payload_bits, payload)
