"""Token frequency statistics."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping

from .errors import UndefinedStatisticError
from .tokenizer import TokenStream


@dataclass(frozen=True)
class FrequencyTable:
    """Counts ``n_k`` per token class. Integer counts are the source of truth."""

    counts: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for k, n in self.counts.items():
            if k < 1:
                raise ValueError(f"token class must be >= 1, got {k}")
            if n < 0:
                raise ValueError(f"negative count for class {k}")
            if n:
                clean[int(k)] = int(n)
        object.__setattr__(self, "counts", dict(sorted(clean.items())))

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def __len__(self) -> int:
        return len(self.counts)

    def probability(self, k: int) -> float:
        total = self.total
        if total == 0:
            raise UndefinedStatisticError("probability of an empty table")
        return self.counts.get(k, 0) / total

    def probabilities(self) -> dict[int, float]:
        total = self.total
        if total == 0:
            return {}
        return {k: n / total for k, n in self.counts.items()}


def count(s: TokenStream) -> FrequencyTable:
    """Tally token classes; the residue is not a token and is not counted."""
    return FrequencyTable(Counter(s.tokens))


def entropy_bits_per_token(t: FrequencyTable) -> float:
    total = t.total
    if total == 0:
        raise UndefinedStatisticError("entropy of an empty table")
    h = -math.fsum(n / total * math.log2(n / total) for n in t.counts.values())
    return max(h, 0.0)


def identity_payload_bits(t: FrequencyTable) -> int:
    return sum(k * n for k, n in t.counts.items())


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -(p * math.log2(p) + (1 - p) * math.log2(1 - p))
