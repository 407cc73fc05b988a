"""Hypothesis strategies and brute-force oracles shared by the test modules."""
from fractions import Fraction
from itertools import permutations, product

from hypothesis import strategies as st

from spectra import Spectrum
from spectra.cover import family, is_covered_by

positive_fractions = st.fractions(min_value=Fraction(1, 64), max_value=64, max_denominator=64)


@st.composite
def spectra(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    vals = draw(st.lists(positive_fractions, min_size=n, max_size=n, unique=True))
    return Spectrum(sorted(vals))


@st.composite
def integer_spectra(draw, min_n=1, max_n=5, top=40):
    n = draw(st.integers(min_n, max_n))
    vals = draw(st.lists(st.integers(1, top), min_size=n, max_size=n, unique=True))
    return Spectrum(sorted(vals))


def signed_vectors(n, bound=2, max_den=4):
    entry = st.fractions(min_value=-bound, max_value=bound, max_denominator=max_den)
    return st.lists(entry, min_size=n, max_size=n).map(tuple)


# -- oracles


def naive_profile(x):
    v = list(x.entries)
    n = len(v)
    return {(i + 1, j + 1, k + 1)
            for i in range(n) for j in range(i, n) for k in range(j + 1, n)
            if v[i] + v[j] >= v[k]}


def cofactor_det(M):
    if not M:
        return 1
    if len(M) == 1:
        return M[0][0]
    total = 0
    for c, a in enumerate(M[0]):
        if a:
            minor = [row[:c] + row[c + 1:] for row in M[1:]]
            total += (-1) ** c * a * cofactor_det(minor)
    return total


def leibniz_det(M):
    n = len(M)
    total = 0
    for perm in permutations(range(n)):
        inv = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = (-1) ** inv
        for r, c in enumerate(perm):
            term *= M[r][c]
        total += term
    return total


def naive_four_value(values):
    """The 4-value condition straight from its definition over the value set."""
    s = sorted(set(values))

    def metric(a, b, c):
        return a <= b + c and b <= a + c and c <= a + b

    for a, b, c, d, e in product(s, repeat=5):
        if metric(a, b, e) and metric(c, d, e):
            if not any(metric(b, c, f) and metric(a, d, f) for f in s):
                return False
    return True


def dominated(t, u):
    """``u`` is forced into any profile containing ``t``."""
    return u[0] >= t[0] and u[1] >= t[1] and u[2] <= t[2]


def naive_monotone(n, members):
    members = set(members)
    from spectra.spectrum import triples
    return all(u in members for t in members for u in triples(n) if dominated(t, u))


def f_covered(x):
    return any(is_covered_by(x, f.vector) for f in family(len(x)))


def ff_covered(x):
    fam = family(len(x))
    return any(is_covered_by(x, tuple(a + b for a, b in zip(f.vector, g.vector)))
               for f in fam for g in fam)
