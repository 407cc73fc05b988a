"""Seeded random instances for property suites and benchmarks.

Every generator takes a ``random.Random`` so corpora are reproducible from a
single seed.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .cover import FElement, family
from .spectrum import Spectrum

CORPUS_SEED = 20240611


def random_fraction(rng: random.Random, low: Fraction, high: Fraction, max_den: int = 16) -> Fraction:
    """A rational in ``[low, high]`` with denominator at most ``max_den``."""
    den = rng.randint(1, max_den)
    lo = -((-low.numerator * den) // low.denominator)
    hi = (high.numerator * den) // high.denominator
    if lo > hi:
        return low
    return Fraction(rng.randint(lo, hi), den)


def random_spectrum(rng: random.Random, n: int) -> Spectrum:
    # half uniform draws, half geometric growth; the latter reaches sparse profiles
    if rng.random() < 0.5:
        top = Fraction(rng.choice((2, 4, 16, 2 ** (n + 2))))
        entries: set[Fraction] = set()
        while len(entries) < n:
            v = random_fraction(rng, Fraction(1, 16), top)
            if v > 0:
                entries.add(v)
        return Spectrum(sorted(entries))
    x = [random_fraction(rng, Fraction(1, 8), Fraction(8))]
    if x[0] == 0:
        x[0] = Fraction(1)
    for _ in range(n - 1):
        ratio = 1 + random_fraction(rng, Fraction(1, 16), Fraction(rng.choice((1, 2, 3))))
        x.append(x[-1] * ratio)
    return Spectrum(x)


def spectrum_corpus(n: int, count: int, seed: int = CORPUS_SEED) -> list[Spectrum]:
    rng = random.Random(f"{seed}:{n}")
    return [random_spectrum(rng, n) for _ in range(count)]


def random_int_matrix(rng: random.Random, n: int, bound: int = 9) -> list[list[int]]:
    return [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)]


def random_element(rng: random.Random, n: int) -> FElement:
    return rng.choice(family(n))


def random_below(rng: random.Random, v: Sequence, max_den: int = 16) -> tuple[Fraction, ...]:
    """A random rational vector covered by ``v``."""
    out = []
    for a in v:
        a = Fraction(a)
        out.append(random_fraction(rng, Fraction(0), abs(a), max_den) * (1 if a >= 0 else -1))
    return tuple(out)


def f_pair_matrix(rng: random.Random, n: int, m: int) -> list[list[int]]:
    """An n by n matrix: m rows from F, the rest sums of two members of F, rows shuffled."""
    rows = [list(random_element(rng, n).vector) for _ in range(m)]
    for _ in range(n - m):
        a, b = random_element(rng, n).vector, random_element(rng, n).vector
        rows.append([x + y for x, y in zip(a, b)])
    rng.shuffle(rows)
    return rows
