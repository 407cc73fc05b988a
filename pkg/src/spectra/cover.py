"""Cover order on signed vectors and the family F of elementary vectors.

``x`` is covered by ``y`` (written ``x <= y`` below) when every coordinate of
``x`` has the sign of the matching coordinate of ``y`` (or is zero) and no
larger magnitude. F consists of the difference vectors ``p(i, j) = e_j - e_i``
for ``i != j`` together with ``+e_i`` and ``-e_i``. Rows of a spectral
polyhedron are covered by sums of two members of F, which is what bounds
the determinants of its bases.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .errors import DimensionMismatch, HypothesisViolated, InvariantViolation, NotCovered, NotFCovered, ZeroVector
from .polytope import det_exact
from .spectrum import to_fraction

SignedVector = tuple  # tuple of Fraction, any sign


def as_vector(x: Sequence) -> SignedVector:
    return tuple(to_fraction(v) for v in x)


def _same_length(x, y) -> None:
    if len(x) != len(y):
        raise DimensionMismatch(f"vectors of length {len(x)} and {len(y)}")


def is_covered_by(x: Sequence, y: Sequence) -> bool:
    """``x <= y``: for all i, ``x_i * y_i >= 0`` and ``|x_i| <= |y_i|``."""
    _same_length(x, y)
    return all(a * b >= 0 and abs(a) <= abs(b) for a, b in zip(x, y))


def sgn(a) -> int:
    # zero maps to zero; only nonzero inputs reach the cases where it matters
    return (a > 0) - (a < 0)


@dataclass(frozen=True)
class FElement:
    """A member of F in dimension ``n``. Indices are 1-based.

    ``kind`` is ``"P"`` for ``p(i, j)`` (-1 at i, +1 at j), ``"+"`` for
    ``+e_i`` and ``"-"`` for ``-e_i``; ``j`` is only used by ``"P"``.
    """

    kind: str
    n: int
    i: int
    j: int = 0

    def __post_init__(self):
        if self.kind not in ("P", "+", "-"):
            raise ValueError(f"unknown F kind {self.kind!r}")
        if not 1 <= self.i <= self.n:
            raise ValueError(f"index {self.i} out of range for n={self.n}")
        if self.kind == "P" and (not 1 <= self.j <= self.n or self.j == self.i):
            raise ValueError(f"p({self.i},{self.j}) needs distinct indices in 1..{self.n}")

    @classmethod
    def p(cls, i: int, j: int, n: int) -> "FElement":
        return cls("P", n, i, j)

    @classmethod
    def plus(cls, i: int, n: int) -> "FElement":
        return cls("+", n, i)

    @classmethod
    def minus(cls, i: int, n: int) -> "FElement":
        return cls("-", n, i)

    @property
    def vector(self) -> tuple[int, ...]:
        v = [0] * self.n
        if self.kind == "P":
            v[self.i - 1], v[self.j - 1] = -1, 1
        else:
            v[self.i - 1] = 1 if self.kind == "+" else -1
        return tuple(v)

    def __str__(self) -> str:
        if self.kind == "P":
            return f"P({self.i},{self.j})"
        return f"{'PlusUnit' if self.kind == '+' else 'MinusUnit'}({self.i})"


@lru_cache(maxsize=None)
def family(n: int) -> tuple[FElement, ...]:
    """F in canonical search order: ``+e_i``, then ``-e_i``, then ``p(i, j)`` lexicographically."""
    return (
        tuple(FElement.plus(i, n) for i in range(1, n + 1))
        + tuple(FElement.minus(i, n) for i in range(1, n + 1))
        + tuple(FElement.p(i, j, n) for i in range(1, n + 1) for j in range(1, n + 1) if i != j)
    )


def _from_signs(n: int, pos: Optional[int], neg: Optional[int]) -> Optional[FElement]:
    if pos is not None and neg is not None:
        return FElement.p(neg, pos, n)
    if pos is not None:
        return FElement.plus(pos, n)
    if neg is not None:
        return FElement.minus(neg, n)
    return None


def f_witness(x: Sequence) -> Optional[FElement]:
    """First member of F, in ``family`` order, that covers ``x``; ``None`` if there is none.

    A vector is covered by F exactly when its entries lie in [-1, 1] and it
    has at most one positive and at most one negative entry, so the witness
    is read off directly.
    """
    n = len(x)
    pos = [c for c, a in enumerate(x) if a > 0]
    neg = [c for c, a in enumerate(x) if a < 0]
    if len(pos) > 1 or len(neg) > 1 or any(abs(a) > 1 for a in x):
        return None
    f = _from_signs(n, pos[0] + 1 if pos else None, neg[0] + 1 if neg else None)
    return f if f is not None else FElement.plus(1, n)


def f_witness_exhaustive(x: Sequence) -> Optional[FElement]:
    return next((f for f in family(len(x)) if is_covered_by(x, f.vector)), None)


def f_pair_witness(x: Sequence) -> Optional[tuple[FElement, FElement]]:
    """Two members of F whose sum covers ``x``, or ``None``.

    Each member of F carries at most one unit of positive and one of negative
    mass, so ``x`` is covered by F + F exactly when it needs at most two
    units of each sign.
    """
    n = len(x)
    if any(abs(a) > 2 for a in x):
        return None
    pos, neg = [], []
    for c, a in enumerate(x):
        need = 0 if a == 0 else (1 if abs(a) <= 1 else 2)
        (pos if a > 0 else neg).extend([c + 1] * need)
    if len(pos) > 2 or len(neg) > 2:
        return None
    f1 = _from_signs(n, pos[0] if pos else None, neg[0] if neg else None)
    f2 = _from_signs(n, pos[1] if len(pos) > 1 else None, neg[1] if len(neg) > 1 else None)
    if f1 is None:
        f1 = FElement.plus(1, n)
    if f2 is None:
        f2 = f1  # doubling a cover of x still covers it
    if not is_covered_by(x, _add(f1.vector, f2.vector)):
        raise InvariantViolation(f"constructed F + F witness ({f1}, {f2}) does not cover {x}")
    return f1, f2


def f_pair_witness_exhaustive(x: Sequence) -> Optional[tuple[FElement, FElement]]:
    fam = family(len(x))
    for a, f1 in enumerate(fam):
        for f2 in fam[a:]:
            if is_covered_by(x, _add(f1.vector, f2.vector)):
                return f1, f2
    return None


def _add(x: Sequence, y: Sequence) -> SignedVector:
    return tuple(a + b for a, b in zip(x, y))


def decompose(x: Sequence, u: Sequence, v: Sequence) -> tuple[SignedVector, SignedVector]:
    """Split ``x <= u + v`` as ``x_u + x_v`` with ``x_u <= u`` and ``x_v <= v``."""
    x, u, v = as_vector(x), as_vector(u), as_vector(v)
    _same_length(x, u)
    _same_length(x, v)
    if not is_covered_by(x, _add(u, v)):
        raise NotCovered("x is not covered by u + v")
    xu = []
    for xi, ui, vi in zip(x, u, v):
        if ui * vi < 0:
            xu.append(xi if ui * xi > 0 else Fraction(0))
        else:
            xu.append(sgn(ui) * min(abs(ui), abs(xi)))
    xu = tuple(xu)
    xv = tuple(a - b for a, b in zip(x, xu))
    return xu, xv


@dataclass(frozen=True)
class Refined:
    """A member of F with some coordinates forced to zero."""

    base: FElement
    zeroed: frozenset[int] = frozenset()  # 1-based coordinates

    @property
    def vector(self) -> tuple[int, ...]:
        return tuple(0 if c + 1 in self.zeroed else a for c, a in enumerate(self.base.vector))

    def as_element(self) -> Optional[FElement]:
        """The member of F equal to ``vector``, or ``None`` when it is the zero vector."""
        v = self.vector
        if not any(v):
            return None
        f = f_witness(v)
        return f if f.vector == v else None


def refine(x: Sequence, y: Sequence, p1: FElement, p2: FElement) -> tuple[Refined, Refined]:
    """Refinements ``q1 <= p1``, ``q2 <= p2`` with ``x + y <= q1 + q2``.

    Wherever ``p1`` and ``p2`` disagree in sign, only the side whose sign
    agrees with ``x + y`` keeps its entry.
    """
    x, y = as_vector(x), as_vector(y)
    a, b = p1.vector, p2.vector
    _same_length(x, a)
    _same_length(y, b)
    if not is_covered_by(x, a):
        raise NotCovered(f"x is not covered by {p1}")
    if not is_covered_by(y, b):
        raise NotCovered(f"y is not covered by {p2}")
    z = _add(x, y)
    zero1, zero2 = set(), set()
    for c in range(len(z)):
        if a[c] * b[c] >= 0:
            continue
        if a[c] * z[c] >= 0:
            zero2.add(c + 1)
        else:
            zero1.add(c + 1)
    return Refined(p1, frozenset(zero1)), Refined(p2, frozenset(zero2))


def _rewrite_pair(s: Sequence[int], fallback: tuple[FElement, FElement]) -> tuple[FElement, FElement]:
    # one +1 and two -1 becomes p(first -1, +1) - e(second -1);
    # two +1 and one -1 becomes p(-1, first +1) + e(second +1)
    n = len(s)
    pos = [c + 1 for c, a in enumerate(s) if a > 0]
    neg = [c + 1 for c, a in enumerate(s) if a < 0]
    if any(abs(a) > 1 for a in s):
        return fallback
    if len(pos) == 1 and len(neg) == 2:
        return FElement.p(neg[0], pos[0], n), FElement.minus(neg[1], n)
    if len(pos) == 2 and len(neg) == 1:
        return FElement.p(neg[0], pos[0], n), FElement.plus(pos[1], n)
    return fallback


def sum_cover(x: Sequence, y: Sequence) -> tuple[FElement, FElement]:
    """Two members of F whose sum covers ``x + y``, given ``x`` and ``y`` are each covered by F."""
    x, y = as_vector(x), as_vector(y)
    _same_length(x, y)
    p1, p2 = f_witness(x), f_witness(y)
    if p1 is None or p2 is None:
        raise NotFCovered("both summands must be covered by a member of F")
    q1, q2 = refine(x, y, p1, p2)
    if not q1.zeroed and not q2.zeroed:
        result = (p1, p2)
    else:
        e1, e2 = q1.as_element(), q2.as_element()
        if e1 is not None and e2 is not None:
            result = _rewrite_pair(_add(e1.vector, e2.vector), (e1, e2))
        else:
            # a clashing unit was zeroed; reinforce the survivor with itself
            keep = e1 if e1 is not None else e2
            result = (keep, keep)
    z = _add(x, y)
    if not is_covered_by(z, _add(result[0].vector, result[1].vector)):
        raise InvariantViolation(f"{result[0]} + {result[1]} does not cover x + y")
    return result


def row_reduce_step(x: Sequence, y: Sequence) -> SignedVector:
    """Eliminate the largest (first-occurring) coordinate of ``x`` from ``y``.

    Returns ``y - (y_j / x_j) x``; the result stays covered by F.
    """
    x, y = as_vector(x), as_vector(y)
    _same_length(x, y)
    if not any(x):
        raise ZeroVector("pivot vector is zero")
    if f_witness(x) is None or f_witness(y) is None:
        raise NotFCovered("both vectors must be covered by a member of F")
    top = max(abs(a) for a in x)
    j = next(c for c, a in enumerate(x) if abs(a) == top)
    ratio = y[j] / x[j]
    out = tuple(b - ratio * a for a, b in zip(x, y))
    if f_witness(out) is None:
        raise InvariantViolation(f"row operation left F coverage: {out}")
    return out


@dataclass(frozen=True)
class DetBoundReport:
    m: int
    bound: int
    det_abs: Fraction
    holds: bool


def _abs_det(M: Sequence[Sequence]) -> Fraction:
    # clear denominators row by row, then use the integer determinant
    rows, scale = [], Fraction(1)
    for row in M:
        row = as_vector(row)
        d = math.lcm(*(a.denominator for a in row)) if row else 1
        rows.append([int(a * d) for a in row])
        scale *= d
    return abs(Fraction(det_exact(rows)) / scale)


def check_det_bound(M: Sequence[Sequence]) -> DetBoundReport:
    """Check ``|det M| <= 2^(n - m)`` where m rows of M are covered by F.

    Every row must be covered by F + F.
    """
    n = len(M)
    m = 0
    for idx, row in enumerate(M):
        if len(row) != n:
            raise DimensionMismatch(f"row {idx + 1} has length {len(row)}, expected {n}")
        if f_pair_witness(row) is None:
            raise HypothesisViolated(f"row {idx + 1} is not covered by F + F")
        if f_witness(row) is not None:
            m += 1
    bound = 2 ** (n - m)
    det_abs = _abs_det(M)
    return DetBoundReport(m, bound, det_abs, det_abs <= bound)
