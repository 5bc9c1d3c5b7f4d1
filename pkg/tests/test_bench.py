import math

import numpy as np
import pytest

from bcod.bench import (
    FlipReport,
    GeneratorSpec,
    XorShift64Star,
    class_probabilities,
    expected_ratio_oracle,
    flip_experiment,
    generate,
    measure,
    parse_generator,
    random_flip_trials,
    summarize,
)
from bcod.bitio import BitVector
from bcod.model import binary_entropy
from bcod.tokenizer import detokenize

from oracles import naive_huffman_cost


def _numpy_xorshift64star(seed, n):
    """Same generator written with wrapping uint64 arithmetic."""
    with np.errstate(over="ignore"):
        z = np.uint64(seed) + np.uint64(0x9E3779B97F4A7C15)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        x = z ^ (z >> np.uint64(31))
        out = []
        for _ in range(n):
            x ^= x >> np.uint64(12)
            x ^= x << np.uint64(25)
            x ^= x >> np.uint64(27)
            out.append(int(x * np.uint64(0x2545F4914F6CDD1D)))
    return out


@pytest.mark.parametrize("seed", [0, 1, 42, 2**63 + 5])
def test_xorshift_matches_uint64_reference(seed):
    rng = XorShift64Star(seed)
    assert [rng.next_u64() for _ in range(20)] == _numpy_xorshift64star(seed, 20)


def test_generate_examples():
    assert generate(GeneratorSpec("zeros", 8)) == BitVector("00000000")
    assert generate(GeneratorSpec("bernoulli", 4, p=1.0)) == BitVector("1111")
    assert generate(GeneratorSpec("ones", 3)) == BitVector("111")
    v = generate(GeneratorSpec("uniform", 10**6, seed=42))
    assert len(v) == 10**6
    assert 0.497 <= v.count(1) / 10**6 <= 0.503


def test_generate_deterministic():
    spec = GeneratorSpec("bernoulli", 5000, seed=9, p=0.3)
    assert generate(spec) == generate(spec)
    assert generate(spec) != generate(GeneratorSpec("bernoulli", 5000, seed=10, p=0.3))


def test_generate_file(tmp_path):
    path = tmp_path / "x.bin"
    path.write_bytes(b"\xa0\x01")
    assert generate(GeneratorSpec("file", 0, path=str(path))) == BitVector("1010000000000001")
    with pytest.raises(FileNotFoundError):
        generate(GeneratorSpec("file", 0, path=str(tmp_path / "missing")))


@pytest.mark.parametrize("text", ["gauss", "bernoulli:x", "bernoulli:1.5", "zeros:3"])
def test_parse_generator_rejects(text):
    with pytest.raises(ValueError):
        parse_generator(text, 10)


def test_parse_generator():
    spec = parse_generator("bernoulli:0.8", 100, 3)
    assert (spec.kind, spec.p, spec.length, spec.seed) == ("bernoulli", 0.8, 100, 3)


def test_class_probabilities_truncation():
    probs = class_probabilities(0.8)
    assert math.isclose(sum(probs.values()), 1.0, abs_tol=1e-12)
    assert max(probs) == 118  # last class with p^(k-1)(1-p) >= 2^-40
    with pytest.raises(ValueError):
        class_probabilities(1.0)


def test_oracle_examples():
    assert expected_ratio_oracle(0.5, "huffman") == pytest.approx(1.0, abs=1e-9)
    assert expected_ratio_oracle(0.5, "symmetric") == pytest.approx(1.0, abs=1e-12)
    r = expected_ratio_oracle(0.8, "huffman")
    assert binary_entropy(0.8) < r < 1.0


@pytest.mark.parametrize("p", [0.3, 0.6, 0.8, 0.9])
def test_oracle_matches_naive_huffman(p):
    probs = class_probabilities(p)
    mean_token = sum(k * q for k, q in probs.items())
    expected = naive_huffman_cost(list(probs.values())) / mean_token
    assert expected_ratio_oracle(p, "huffman") == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("p", [0.6, 0.7, 0.8, 0.9])
def test_measured_ratio_tracks_oracle(p):
    v = generate(GeneratorSpec("bernoulli", 10**6, seed=1, p=p))
    row = measure("b", v, "huffman")
    assert abs(row.payload_ratio - expected_ratio_oracle(p, "huffman")) <= 0.02
    assert row.payload_ratio >= binary_entropy(p)


def test_uniform_ratio_near_one():
    row = measure("u", generate(GeneratorSpec("uniform", 10**6, seed=5)), "huffman")
    assert abs(row.payload_ratio - 1.0) <= 0.01


def test_zeros_container_overhead_reported():
    row = measure("z", generate(GeneratorSpec("zeros", 1000)), "huffman")
    assert row.payload_ratio == 1.0
    assert row.container_ratio > 1.0


def test_summarize():
    rows = [measure("a", BitVector("0" * 64), "huffman"),
            measure("b", BitVector("10" * 32), "symmetric")]
    s = summarize(rows)
    assert s.bits == 128
    assert s.payload_ratio == pytest.approx((rows[0].payload_ratio + rows[1].payload_ratio) / 2)


def test_flip_zero_flips(sample_bits):
    r = flip_experiment(sample_bits, [])
    assert r == FlipReport(49, 49, 49, 49, 0, ())


def test_flip_in_run_of_zero_codewords():
    v = detokenize([1] * 40)   # every token is class 1, codeword "0"
    r = flip_experiment(v, [20])
    assert r.total == 40
    assert r.forward == 20 and r.backward == 19
    assert r.window_bits <= 2
    assert r.bidirectional >= 38


def test_flip_eleven_to_ten():
    # book {k=1: "0", k=2: "11"}; payload 0 11 0 11 0 11 0, flip bit 4 turns "11" into "10"
    v = detokenize([1, 2, 1, 2, 1, 2, 1])
    r = flip_experiment(v, [4])
    assert r.forward < r.total
    assert r.forward == 3          # tokens before the damaged codeword survive
    assert r.backward >= 3         # and so do the ones after it, read backward
    assert r.bidirectional >= max(r.forward, r.backward)


def test_flip_out_of_range(sample_bits):
    with pytest.raises(ValueError):
        flip_experiment(sample_bits, [78])


def test_flip_report_invariants_random_trials():
    v = generate(GeneratorSpec("bernoulli", 4000, seed=11, p=0.6))
    reports = random_flip_trials(v, 1000, flips=1, seed=123)
    assert len(reports) == 1000
    for r in reports:
        assert r.bidirectional >= max(r.forward, r.backward)
        assert max(r.forward, r.backward, r.bidirectional) <= r.total
        assert len(r.positions) == 1
