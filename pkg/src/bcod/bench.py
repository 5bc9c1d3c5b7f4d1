"""Synthetic sources, analytic ratio oracle and the bit-flip experiment."""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Optional

from . import coders
from .bitio import BitVector, from_bytes
from .container import Mode, compress, decompress, pack

_MASK64 = (1 << 64) - 1
ORACLE_TAIL = 2.0 ** -40


class XorShift64Star:
    """xorshift64* (Vigna 2014), seeded through one splitmix64 step.

    Pure integer arithmetic, so sequences are identical on every platform.
    """

    def __init__(self, seed: int = 0):
        z = (seed + 0x9E3779B97F4A7C15) & _MASK64
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        z ^= z >> 31
        self.state = z or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & _MASK64
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & _MASK64

    def random(self) -> float:
        """Uniform float in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def randbelow(self, n: int) -> int:
        if n <= 0:
            raise ValueError("n must be positive")
        # rejection keeps the draw unbiased
        limit = (1 << 64) - (1 << 64) % n
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n


GENERATOR_KINDS = ("uniform", "bernoulli", "zeros", "ones", "file")


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    length: int = 0
    seed: int = 0
    p: float = 0.5
    path: Optional[str] = None

    def __post_init__(self):
        if self.kind not in GENERATOR_KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"bernoulli p must lie in [0, 1], got {self.p}")
        if self.length < 0:
            raise ValueError("length must be non-negative")
        if self.kind == "file" and not self.path:
            raise ValueError("file generator needs a path")

    @property
    def label(self) -> str:
        if self.kind == "bernoulli":
            return f"bernoulli:{self.p:g}"
        if self.kind == "file":
            return f"file:{self.path}"
        return self.kind


def parse_generator(text: str, length: int = 0, seed: int = 0) -> GeneratorSpec:
    """Parse ``uniform | bernoulli:p | zeros | ones | file:path``."""
    kind, _, arg = text.partition(":")
    if kind == "bernoulli":
        try:
            p = float(arg)
        except ValueError:
            raise ValueError(f"bad bernoulli probability in {text!r}") from None
        return GeneratorSpec("bernoulli", length, seed, p=p)
    if kind == "file":
        return GeneratorSpec("file", length, seed, path=arg)
    if arg:
        raise ValueError(f"generator {kind!r} takes no argument")
    return GeneratorSpec(kind, length, seed)


def generate(spec: GeneratorSpec) -> BitVector:
    n = spec.length
    if spec.kind == "zeros":
        return BitVector._trusted("0" * n)
    if spec.kind == "ones":
        return BitVector._trusted("1" * n)
    if spec.kind == "file":
        data = Path(spec.path).read_bytes()
        v = from_bytes(data, 8 * len(data))
        return v[:n] if n else v
    rng = XorShift64Star(spec.seed)
    if spec.kind == "uniform":
        words = [format(rng.next_u64(), "064b") for _ in range((n + 63) // 64)]
        return BitVector._trusted("".join(words)[:n])
    p = spec.p
    rand = rng.random
    return BitVector._trusted("".join(["1" if rand() < p else "0" for _ in range(n)]))


def class_probabilities(p: float, tail: float = ORACLE_TAIL) -> dict[int, float]:
    """P(k) = p^(k-1) (1-p) for an i.i.d. source with P(bit=1) = p.

    Classes rarer than ``tail`` are dropped and the rest renormalised.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in the open interval (0, 1), got {p}")
    probs = {}
    k = 1
    q = 1.0 - p
    while True:
        pk = p ** (k - 1) * q
        if pk < tail:
            break
        probs[k] = pk
        k += 1
    z = math.fsum(probs.values())
    return {k: v / z for k, v in probs.items()}


def _lengths_for(mode: str, probs: dict[int, float]) -> dict[int, int]:
    if mode == "huffman":
        return coders.huffman_lengths(probs)
    if mode == "symmetric":
        ranking = sorted(probs, key=lambda k: (-probs[k], k))
        return {k: r for r, k in enumerate(ranking, 1)}
    if mode == "shannon":
        return {k: max(1, math.ceil(-math.log2(pk))) for k, pk in probs.items()}
    if mode in ("identity", "raw"):
        return {k: k for k in probs}
    raise ValueError(f"unknown mode {mode!r}")


def expected_ratio_oracle(p: float, mode: str = "huffman") -> float:
    """Expected payload bits per source bit for a Bernoulli(p) source."""
    probs = class_probabilities(p)
    lengths = _lengths_for(str(getattr(mode, "label", mode)).lower(), probs)
    coded = math.fsum(probs[k] * lengths[k] for k in probs)
    source = math.fsum(probs[k] * k for k in probs)
    return coded / source


# -- measurement ---------------------------------------------------------------

@dataclass
class BenchRow:
    name: str
    bits: int
    mode: str
    payload_bits: int
    residue_len: int
    container_bytes: int
    payload_ratio: float
    container_ratio: float
    seconds: float

    def as_dict(self) -> dict:
        return asdict(self)


def measure(name: str, v: BitVector, mode: str | Mode, verify: bool = True) -> BenchRow:
    mode = Mode.parse(mode)
    t0 = time.perf_counter()
    archive = compress(v, mode)
    packed = pack(archive)
    if verify and decompress(archive) != v:
        raise AssertionError(f"round trip failed for {name} in {mode.label} mode")
    seconds = time.perf_counter() - t0
    n = len(v)
    payload_ratio = archive.ratio_bits / n if n else 1.0
    container_ratio = 8 * len(packed) / n if n else math.inf
    return BenchRow(name, n, mode.label, archive.payload_bits, archive.residue_len,
                    len(packed), payload_ratio, container_ratio, seconds)


def summarize(rows: Iterable[BenchRow]) -> BenchRow:
    rows = list(rows)
    if not rows:
        raise ValueError("nothing to summarize")
    finite = [r.container_ratio for r in rows if math.isfinite(r.container_ratio)]
    return BenchRow(
        name="mean",
        bits=sum(r.bits for r in rows),
        mode="/".join(sorted({r.mode for r in rows})),
        payload_bits=sum(r.payload_bits for r in rows),
        residue_len=sum(r.residue_len for r in rows),
        container_bytes=sum(r.container_bytes for r in rows),
        payload_ratio=sum(r.payload_ratio for r in rows) / len(rows),
        container_ratio=sum(finite) / len(finite) if finite else math.inf,
        seconds=sum(r.seconds for r in rows) / len(rows),
    )


# -- bit-flip experiment ---------------------------------------------------------

Span = tuple[int, int, int]  # (start bit, end bit, token class)


def resync_parse(s: str, matcher) -> list[Span]:
    """Greedy parse that skips one bit wherever no codeword matches.

    Stops at a tail that is only a codeword prefix. Used for damaged payloads;
    the library decoder stays strict.
    """
    spans = []
    pos = 0
    n = len(s)
    inverse = matcher.inverse
    while pos < n:
        w = matcher.match_at(s, pos)
        if w is None:
            if s[pos:] in matcher.prefixes:
                break
            pos += 1
            continue
        spans.append((pos, pos + len(w), inverse[w]))
        pos += len(w)
    return spans


def forward_spans(payload: str, book: coders.CodeBook) -> list[Span]:
    return resync_parse(payload, book._forward)


def backward_spans(payload: str, book: coders.CodeBook) -> list[Span]:
    """Parse from the last bit backward; spans are returned in forward order."""
    n = len(payload)
    rev = resync_parse(payload[::-1], book._backward)
    return [(n - end, n - start, k) for start, end, k in reversed(rev)]


@dataclass(frozen=True)
class FlipReport:
    total: int
    forward: int
    backward: int
    bidirectional: int
    window_bits: int
    positions: tuple[int, ...] = ()

    def as_dict(self) -> dict:
        d = asdict(self)
        d["positions"] = list(self.positions)
        return d


def _splice(truth: list[Span], fwd: list[Span], bwd: list[Span], payload_bits: int,
            positions) -> FlipReport:
    total = len(truth)
    head = 0
    for a, b in zip(truth, fwd):
        if a != b:
            break
        head += 1
    tail = 0
    for a, b in zip(reversed(truth), reversed(bwd)):
        if a != b:
            break
        tail += 1
    if head + tail >= total:
        return FlipReport(total, head, tail, total, 0, tuple(positions))
    lo = truth[head - 1][1] if head else 0
    hi = truth[total - tail][0] if tail else payload_bits
    return FlipReport(total, head, tail, head + tail, max(0, hi - lo), tuple(positions))


def flip_experiment(v: BitVector, positions: Iterable[int]) -> FlipReport:
    """Encode ``v`` with the symmetric book, flip payload bits, decode both ways.

    Forward tokens are trusted up to the first point where they stop matching
    the original stream, backward tokens from the end down to theirs; the
    bidirectional result splices the two around the damaged window.
    """
    positions = sorted(set(positions))
    archive = compress(v, Mode.SYMMETRIC)
    n = archive.payload_bits
    for pos in positions:
        if not 0 <= pos < n:
            raise ValueError(f"flip position {pos} outside payload of {n} bits")
    if not archive.table:
        return FlipReport(0, 0, 0, 0, 0, tuple(positions))
    book = coders.symmetric_from_ranking([e[0] for e in archive.table])
    clean = archive.payload.bits
    truth = forward_spans(clean, book)
    damaged = list(clean)
    for pos in positions:
        damaged[pos] = "1" if damaged[pos] == "0" else "0"
    damaged = "".join(damaged)
    return _splice(truth, forward_spans(damaged, book), backward_spans(damaged, book),
                   n, positions)


def random_flip_trials(v: BitVector, trials: int, flips: int = 1,
                       seed: int = 0) -> list[FlipReport]:
    """Independent trials; trial ``i`` draws its positions from seed ``seed + i``."""
    n = compress(v, Mode.SYMMETRIC).payload_bits
    if flips > n:
        raise ValueError(f"cannot flip {flips} of {n} payload bits")
    reports = []
    for i in range(trials):
        rng = XorShift64Star(seed + i)
        chosen: set[int] = set()
        while len(chosen) < flips:
            chosen.add(rng.randbelow(n))
        reports.append(flip_experiment(v, chosen))
    return reports
