"""Codebooks over token classes and the codecs that apply them.

Four book kinds are built from a :class:`FrequencyTable`:

* ``huffman``   minimum-redundancy prefix code, canonical labelling
* ``shannon``   cumulative-probability code with lengths ``ceil(-log2 p)``
* ``symmetric`` palindromes ``0, 11, 101, 1001, ...`` ranked by frequency
* ``identity``  every class maps to its own run pattern
"""

from __future__ import annotations

import heapq
import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import count as _counter
from typing import Iterable, Mapping, Sequence

from .bitio import BitVector
from .errors import (
    EmptyAlphabetError,
    IncompleteCodebookError,
    InvalidPayloadError,
    TruncatedPayloadError,
)
from .model import FrequencyTable
from .tokenizer import TokenStream, token_str

KINDS = ("huffman", "shannon", "symmetric", "identity")


def is_prefix_free(words: Iterable[str]) -> bool:
    ordered = sorted(words)
    # in lexicographic order a prefix sorts directly before some extension of it
    return all(not b.startswith(a) for a, b in zip(ordered, ordered[1:]))


def is_suffix_free(words: Iterable[str]) -> bool:
    return is_prefix_free(w[::-1] for w in words)


@dataclass(frozen=True)
class CodeBook:
    kind: str
    entries: Mapping[int, BitVector]
    prefix_free: bool = field(init=False)
    suffix_free: bool = field(init=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown codebook kind {self.kind!r}")
        entries = {int(k): BitVector(v) for k, v in self.entries.items()}
        words = [v.bits for v in entries.values()]
        if any(not w for w in words):
            raise ValueError("empty codeword")
        if len(set(words)) != len(words):
            raise ValueError("codebook is not injective")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "prefix_free", is_prefix_free(words))
        object.__setattr__(self, "suffix_free", is_suffix_free(words))

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, k: int) -> BitVector:
        return self.entries[k]

    def lengths(self) -> dict[int, int]:
        return {k: len(v) for k, v in self.entries.items()}

    def payload_bits(self, t: FrequencyTable) -> int:
        """Encoded size of a stream with counts ``t`` (classes must be present)."""
        try:
            return sum(n * len(self.entries[k]) for k, n in t.counts.items())
        except KeyError as exc:
            raise IncompleteCodebookError(exc.args[0]) from None

    @cached_property
    def _strings(self) -> dict[int, str]:
        return {k: v.bits for k, v in self.entries.items()}

    @cached_property
    def _shape(self) -> str | None:
        # the symmetric and identity families have a closed-form regular shape;
        # scanning by shape beats a long literal alternation
        if self.kind == "symmetric":
            return "0|10*1"
        if self.kind == "identity":
            return "1*0"
        return None

    @cached_property
    def _forward(self) -> "_Matcher":
        return _Matcher({v: k for k, v in self._strings.items()}, self._shape)

    @cached_property
    def _backward(self) -> "_Matcher":
        shape = "0|10*1" if self.kind == "symmetric" else None
        return _Matcher({v[::-1]: k for k, v in self._strings.items()}, shape)


class _Matcher:
    """Greedy prefix matcher for a prefix-free word set."""

    def __init__(self, inverse: dict[str, int], shape: str | None = None):
        self.inverse = inverse
        self.lengths = sorted({len(w) for w in inverse})
        if not inverse:
            self.pattern = None
        elif shape is not None:
            # shape may match words outside the book; those fail the lookup below
            self.pattern = re.compile(shape)
        else:
            # shortest words first: the common case for frequency-ranked books
            alternatives = sorted(inverse, key=lambda w: (len(w), w))
            self.pattern = re.compile("|".join(alternatives))

    @cached_property
    def prefixes(self) -> set[str]:
        # only needed to tell truncation from garbage on the error path
        return {w[:i] for w in self.inverse for i in range(1, len(w))}

    def parse(self, s: str, table: dict | None = None) -> list:
        """Split ``s`` into codewords and map each through ``table``
        (default: the word's token class)."""
        if not s:
            return []
        if self.pattern is not None:
            matches = self.pattern.findall(s)
            # matches never overlap, so full coverage means the parse is exact
            if sum(map(len, matches)) == len(s):
                try:
                    return list(map((table or self.inverse).__getitem__, matches))
                except KeyError:
                    pass
        self.diagnose(s)
        raise AssertionError("unreachable: fast parse failed but strict parse succeeded")

    def match_at(self, s: str, pos: int) -> str | None:
        for n in self.lengths:
            w = s[pos:pos + n]
            if len(w) < n:
                return None
            if w in self.inverse:
                return w
        return None

    def diagnose(self, s: str) -> None:
        """Walk ``s`` strictly and raise at the first failure."""
        pos = 0
        while pos < len(s):
            w = self.match_at(s, pos)
            if w is None:
                rest = s[pos:]
                if rest in self.prefixes:
                    raise TruncatedPayloadError(
                        f"payload ends inside a codeword at bit {pos}", pos)
                raise InvalidPayloadError(f"no codeword matches at bit {pos}", pos)
            pos += len(w)


def _require_symbols(t: FrequencyTable) -> None:
    if t.total < 1:
        raise EmptyAlphabetError("cannot build a codebook for an empty table")


def huffman_lengths(weights: Mapping[int, float]) -> dict[int, int]:
    """Huffman code lengths for positive ``weights`` keyed by token class.

    Ties between equal weights are broken so the result is reproducible:
    merged nodes are taken before leaves (the most recently merged first),
    then leaves with the larger class first, so among equally frequent
    classes the smaller ``k`` never gets the longer code.
    """
    if not weights:
        return {}
    if len(weights) == 1:
        (k,) = weights
        return {k: 1}
    serial = _counter(1)
    heap = []
    for k, w in weights.items():
        # (weight, 0=merged/1=leaf, order, leaves)
        heap.append((w, 1, -k, (k,)))
    heapq.heapify(heap)
    depth = dict.fromkeys(weights, 0)
    while len(heap) > 1:
        w1, _, _, leaves1 = heapq.heappop(heap)
        w2, _, _, leaves2 = heapq.heappop(heap)
        for k in leaves1:
            depth[k] += 1
        for k in leaves2:
            depth[k] += 1
        heapq.heappush(heap, (w1 + w2, 0, -next(serial), leaves1 + leaves2))
    return depth


def canonical_codes(lengths: Mapping[int, int]) -> dict[int, str]:
    """Assign codewords in ``(length, k)`` order, numerically increasing."""
    codes: dict[int, str] = {}
    code = 0
    prev = 0
    for k, n in sorted(lengths.items(), key=lambda kv: (kv[1], kv[0])):
        if n < 1:
            raise ValueError(f"code length must be >= 1, got {n} for class {k}")
        code <<= n - prev
        prev = n
        if code >> n:
            raise ValueError("code lengths violate the Kraft inequality")
        codes[k] = format(code, f"0{n}b")
        code += 1
    return codes


def book_from_lengths(lengths: Mapping[int, int]) -> CodeBook:
    return CodeBook("huffman", {k: BitVector._trusted(c)
                                for k, c in canonical_codes(lengths).items()})


def build_huffman(t: FrequencyTable) -> CodeBook:
    _require_symbols(t)
    return book_from_lengths(huffman_lengths(t.counts))


def shannon_order(t: FrequencyTable) -> list[int]:
    """Classes by descending count, smaller ``k`` first on ties."""
    return sorted(t.counts, key=lambda k: (-t.counts[k], k))


def shannon_length(n_k: int, total: int) -> int:
    """Smallest ``l >= 1`` with ``2**-l <= n_k / total``."""
    length = 0
    while (n_k << length) < total:
        length += 1
    return max(length, 1)


def build_shannon(t: FrequencyTable) -> CodeBook:
    _require_symbols(t)
    total = t.total
    entries = {}
    cumulative = 0  # numerator over ``total``
    for k in shannon_order(t):
        n_k = t.counts[k]
        length = shannon_length(n_k, total)
        numerator = cumulative
        bits = []
        for _ in range(length):
            numerator *= 2
            if numerator >= total:
                bits.append("1")
                numerator -= total
            else:
                bits.append("0")
        entries[k] = BitVector._trusted("".join(bits))
        cumulative += n_k
    return CodeBook("shannon", entries)


def palindrome(rank: int) -> BitVector:
    """Member ``rank`` of ``{0, 11, 101, 1001, ...}``; its length equals ``rank``."""
    if rank < 1:
        raise ValueError(f"palindrome rank must be >= 1, got {rank}")
    if rank == 1:
        return BitVector._trusted("0")
    return BitVector._trusted("1" + "0" * (rank - 2) + "1")


def symmetric_from_ranking(ranking: Sequence[int]) -> CodeBook:
    return CodeBook("symmetric", {k: palindrome(r) for r, k in enumerate(ranking, 1)})


def build_symmetric(t: FrequencyTable) -> CodeBook:
    _require_symbols(t)
    return symmetric_from_ranking(shannon_order(t))


def build_identity(t: FrequencyTable) -> CodeBook:
    return CodeBook("identity", {k: BitVector._trusted(token_str(k)) for k in t.counts})


BUILDERS = {
    "huffman": build_huffman,
    "shannon": build_shannon,
    "symmetric": build_symmetric,
    "identity": build_identity,
}


def build(kind: str, t: FrequencyTable) -> CodeBook:
    try:
        builder = BUILDERS[kind]
    except KeyError:
        raise ValueError(f"unknown codebook kind {kind!r}") from None
    return builder(t)


def encode(s: TokenStream | Sequence[int], b: CodeBook) -> BitVector:
    """Concatenate codewords for each token. The residue is not encoded."""
    tokens = s.tokens if isinstance(s, TokenStream) else s
    codes = b._strings
    try:
        return BitVector._trusted("".join(map(codes.__getitem__, tokens)))
    except KeyError as exc:
        raise IncompleteCodebookError(exc.args[0]) from None


def decode(payload: BitVector, b: CodeBook) -> list[int]:
    if not b.prefix_free:
        raise ValueError(f"{b.kind} book is not prefix-free; cannot decode forward")
    return b._forward.parse(payload.bits)


def decode_reverse(payload: BitVector, b: CodeBook) -> list[int]:
    """Decode from the last bit toward the first; tokens come out last-first."""
    if not b.suffix_free:
        raise ValueError(f"{b.kind} book is not suffix-free; cannot decode backward")
    s = payload.bits[::-1]
    try:
        return b._backward.parse(s)
    except (TruncatedPayloadError, InvalidPayloadError) as exc:
        # report the failing position in forward coordinates
        pos = len(s) - exc.position
        raise type(exc)(f"backward parse failed ending at bit {pos}", pos) from None


def kraft_sum(b: CodeBook) -> float:
    return math.fsum(2.0 ** -len(v) for v in b.entries.values())
