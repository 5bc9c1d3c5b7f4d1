"""Reference computations kept apart from the code they check."""

import itertools
from fractions import Fraction


def brute_force_min_payload(counts):
    """Smallest sum(n * l) over every Kraft-feasible length profile."""
    m = len(counts)
    if m == 1:
        return counts[0]
    best = None
    for profile in itertools.product(range(1, m), repeat=m):
        if sum(Fraction(1, 2 ** l) for l in profile) <= 1:
            cost = sum(n * l for n, l in zip(counts, profile))
            if best is None or cost < best:
                best = cost
    return best


def shannon_codewords(counts):
    """Codewords for counts already sorted in decreasing order, by exact fractions."""
    total = sum(counts)
    cumulative = Fraction(0)
    words = []
    for n in counts:
        p = Fraction(n, total)
        length = 0
        while Fraction(1, 2 ** length) > p:
            length += 1
        length = max(length, 1)
        frac = cumulative
        word = ""
        for _ in range(length):
            frac *= 2
            bit = int(frac >= 1)
            word += str(bit)
            frac -= bit
        words.append(word)
        cumulative += p
    return words


def naive_huffman_cost(weights):
    """Expected length via the textbook list-based merge (no heap, no tie rules)."""
    pool = sorted(weights)
    cost = 0.0
    while len(pool) > 1:
        a, b = pool[0], pool[1]
        cost += a + b
        pool = sorted(pool[2:] + [a + b])
    return cost
