"""Split any bit vector into run tokens ``1^(k-1) 0`` plus a residue of 1s.

The family ``{0, 10, 110, 1110, ...}`` is prefix-free and every bit string
is a unique concatenation of its members followed by zero or more trailing
1s, so the split is total and reversible.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .bitio import BitVector


@lru_cache(maxsize=4096)
def token_str(k: int) -> str:
    if k < 1:
        raise ValueError(f"token class must be >= 1, got {k}")
    return "1" * (k - 1) + "0"


def token_bits(k: int) -> BitVector:
    """Canonical pattern of class ``k``: ``k - 1`` ones then a zero."""
    return BitVector._trusted(token_str(k))


@dataclass(frozen=True)
class TokenStream:
    tokens: tuple[int, ...]
    residue: int = 0

    def __post_init__(self):
        if not isinstance(self.tokens, tuple):
            object.__setattr__(self, "tokens", tuple(self.tokens))
        if self.residue < 0:
            raise ValueError("residue must be non-negative")

    @property
    def bit_length(self) -> int:
        return sum(self.tokens) + self.residue


def tokenize(v: BitVector) -> TokenStream:
    runs = v.bits.split("0")
    # every piece but the last was closed by a zero
    tokens = tuple(map((1).__add__, map(len, runs[:-1])))
    return TokenStream(tokens, len(runs[-1]))


def detokenize(s: TokenStream | Sequence[int], residue: int | None = None) -> BitVector:
    if isinstance(s, TokenStream):
        tokens, res = s.tokens, s.residue
    else:
        tokens, res = s, 0
    if residue is not None:
        res = residue
    patterns = {k: token_str(k) for k in set(tokens)}
    return BitVector._trusted("".join(map(patterns.__getitem__, tokens)) + "1" * res)
