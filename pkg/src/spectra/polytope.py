"""Spectral polyhedra and exact integer linear algebra.

The polyhedron of a profile is ``{x : A x >= b}`` with one row per triple
(``x_i + x_j - x_k >= 0`` for members, ``-(x_i + x_j - x_k) >= 1`` otherwise),
one row ``x_j - x_i >= 1`` per pair ``i < j`` and one row ``x_i >= 1`` per
index. Every point of it is a spectrum with the given profile, and the unit
rows make it pointed, so a vertex always exists.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (
    DimensionMismatch,
    InconsistentProfile,
    InternalInfeasibility,
    InvariantViolation,
    NotFeasible,
    NotSquare,
    SingularMatrix,
    UnboundedDirection,
)
from .spectrum import (
    AnySpectrum,
    TriangleProfile,
    format_spectrum,
    monotone_consistent,
    profile,
    to_fraction,
    triples,
)

POS, NEG, GAP, UNIT = "TriplePos", "TripleNeg", "Gap", "Unit"


@dataclass(frozen=True)
class RowKind:
    tag: str
    index: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.tag}({','.join(map(str, self.index))})"


@dataclass(frozen=True)
class ConstraintRow:
    kind: RowKind
    coefficients: tuple[int, ...]
    rhs: int
    # (column, coefficient) pairs for the nonzero entries; rows have at most three
    support: tuple[tuple[int, int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "support", tuple((c, a) for c, a in enumerate(self.coefficients) if a)
        )

    def dot(self, x: Sequence):
        return sum(a * x[c] for c, a in self.support)


def _triple_row(n: int, t, member: bool) -> ConstraintRow:
    i, j, k = t
    coef = [0] * n
    coef[i - 1] += 1
    coef[j - 1] += 1
    coef[k - 1] -= 1
    if member:
        return ConstraintRow(RowKind(POS, t), tuple(coef), 0)
    return ConstraintRow(RowKind(NEG, t), tuple(-c for c in coef), 1)


@dataclass(frozen=True)
class ConstraintSystem:
    n: int
    rows: tuple[ConstraintRow, ...]

    @property
    def matrix(self) -> list[list[int]]:
        return [list(r.coefficients) for r in self.rows]

    @property
    def rhs(self) -> list[int]:
        return [r.rhs for r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["kind", *[f"x{c + 1}" for c in range(self.n)], "rhs"])
        for r in self.rows:
            writer.writerow([str(r.kind), *r.coefficients, r.rhs])
        return buf.getvalue()


def build_system(p: TriangleProfile) -> ConstraintSystem:
    if not monotone_consistent(p):
        raise InconsistentProfile("profile is not monotone consistent, so no spectrum realizes it")
    n = p.n
    rows = [_triple_row(n, t, m) for t, m in zip(triples(n), p.members)]
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            coef = [0] * n
            coef[i - 1], coef[j - 1] = -1, 1
            rows.append(ConstraintRow(RowKind(GAP, (i, j)), tuple(coef), 1))
    for i in range(1, n + 1):
        coef = [0] * n
        coef[i - 1] = 1
        rows.append(ConstraintRow(RowKind(UNIT, (i,)), tuple(coef), 1))
    return ConstraintSystem(n, tuple(rows))


@dataclass(frozen=True)
class RationalPoint:
    coords: tuple[Fraction, ...]

    def __init__(self, coords):
        object.__setattr__(self, "coords", tuple(to_fraction(c) for c in coords))

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, index):
        return self.coords[index]


def _coords(pt) -> tuple[Fraction, ...]:
    if isinstance(pt, RationalPoint):
        return pt.coords
    if hasattr(pt, "entries"):
        return tuple(Fraction(v) for v in pt.entries)
    return tuple(to_fraction(v) for v in pt)


def _homogeneous(pt) -> tuple[list[int], int]:
    """Integer numerators and a positive common denominator for ``pt``."""
    x = _coords(pt)
    q = math.lcm(*(c.denominator for c in x)) if x else 1
    return [c.numerator * (q // c.denominator) for c in x], q


def contains(sys: ConstraintSystem, pt) -> bool:
    X, q = _homogeneous(pt)
    if len(X) != sys.n:
        raise DimensionMismatch(f"point has {len(X)} coordinates, system has dimension {sys.n}")
    return all(r.dot(X) >= r.rhs * q for r in sys.rows)


def feasible_point(x: AnySpectrum, sys: ConstraintSystem | None = None) -> RationalPoint:
    """Scale ``x`` so that every row with right-hand side 1 has slack at least 1."""
    if sys is None:
        sys = build_system(profile(x))
    X, q = _homogeneous(x)
    alpha = Fraction(1)
    for r in sys.rows:
        s = r.dot(X)  # row value is s / q
        if r.rhs == 1:
            if s <= 0:
                raise InternalInfeasibility(f"row {r.kind} is not positive at {format_spectrum(x)}")
            alpha = max(alpha, Fraction(q, s))
        elif s < 0:
            raise InternalInfeasibility(f"row {r.kind} is violated at {format_spectrum(x)}")
    point = RationalPoint(alpha * Fraction(a, q) for a in X)
    if not contains(sys, point):
        raise InternalInfeasibility(f"scaled point {point.coords} left the polyhedron")
    return point


class _Echelon:
    """Incrementally maintained reduced row echelon form over the rationals."""

    def __init__(self, n: int):
        self.n = n
        self.rows: list[list[Fraction]] = []
        self.pivots: list[int] = []

    def _reduce(self, vec) -> list[Fraction]:
        v = [Fraction(a) for a in vec]
        for row, p in zip(self.rows, self.pivots):
            if v[p]:
                f = v[p]
                v = [a - f * b for a, b in zip(v, row)]
        return v

    def add(self, vec) -> bool:
        """Add ``vec`` if it is independent of the current rows; report whether it was."""
        v = self._reduce(vec)
        p = next((c for c, a in enumerate(v) if a), None)
        if p is None:
            return False
        inv = 1 / v[p]
        v = [a * inv for a in v]
        for idx, row in enumerate(self.rows):
            if row[p]:
                f = row[p]
                self.rows[idx] = [a - f * b for a, b in zip(row, v)]
        self.rows.append(v)
        self.pivots.append(p)
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)

    def null_direction(self) -> list[int]:
        """Null space vector built on the smallest free column, scaled to integers."""
        free = min(c for c in range(self.n) if c not in self.pivots)
        d = [Fraction(0)] * self.n
        d[free] = Fraction(1)
        for row, p in zip(self.rows, self.pivots):
            d[p] = -row[free]
        m = math.lcm(*(c.denominator for c in d))
        return [int(c * m) for c in d]


@dataclass(frozen=True)
class VertexCertificate:
    point: RationalPoint
    basis: tuple[int, ...]
    basis_det: int

    def basis_matrix(self, sys: ConstraintSystem) -> list[list[int]]:
        return [list(sys.rows[r].coefficients) for r in self.basis]

    def verify(self, sys: ConstraintSystem) -> None:
        """Re-check the certificate from scratch; raise ``InvariantViolation`` on failure."""
        x = self.point.coords
        if len(self.basis) != sys.n or len(set(self.basis)) != sys.n:
            raise InvariantViolation(f"basis {self.basis} does not name {sys.n} distinct rows")
        if not contains(sys, self.point):
            raise InvariantViolation("vertex violates a constraint")
        for r in self.basis:
            if sys.rows[r].dot(x) != sys.rows[r].rhs:
                raise InvariantViolation(f"basis row {sys.rows[r].kind} is not active")
        B = self.basis_matrix(sys)
        d = det_exact(B)
        if d == 0 or d != self.basis_det:
            raise InvariantViolation(f"basis determinant {d} does not match certificate {self.basis_det}")
        if cramer_solve(B, [sys.rows[r].rhs for r in self.basis]).coords != x:
            raise InvariantViolation("Cramer solution of the basis differs from the vertex")


def purify_to_vertex(sys: ConstraintSystem, start) -> VertexCertificate:
    """Walk from a feasible point to a vertex by ray shooting in null-space directions.

    Each move keeps every active row active and makes at least one new,
    linearly independent row tight, so at most ``n`` moves are needed.
    The walk runs on integer numerators over a shared denominator ``q``.
    """
    n = sys.n
    X, q = _homogeneous(start)
    if len(X) != n:
        raise DimensionMismatch(f"start has {len(X)} coordinates, system has dimension {n}")
    rows = sys.rows
    slack = [r.dot(X) - r.rhs * q for r in rows]  # true slack is slack / q
    bad = [str(rows[i].kind) for i, s in enumerate(slack) if s < 0]
    if bad:
        raise NotFeasible(f"start point violates {', '.join(bad)}")

    echelon = _Echelon(n)
    basis: list[int] = []

    def absorb(candidates):
        for idx in candidates:
            if echelon.rank == n:
                break
            if echelon.add(rows[idx].coefficients):
                basis.append(idx)

    absorb(i for i, s in enumerate(slack) if s == 0)
    while echelon.rank < n:
        d = echelon.null_direction()
        change = [r.dot(d) for r in rows]
        best = None  # (slack, |rate|, sign); the step length is slack / (q |rate|)
        for sign in (1, -1):
            hit = None
            for i, c in enumerate(change):
                if sign * c < 0:
                    rate = abs(c)
                    if hit is None or slack[i] * hit[1] < hit[0] * rate:
                        hit = (slack[i], rate)
            if hit is not None and (best is None or hit[0] * best[1] < best[0] * hit[1]):
                best = (hit[0], hit[1], sign)
        if best is None:
            raise UnboundedDirection(f"direction {d} is unbounded both ways; polyhedron is not pointed")
        s_hit, rate, sign = best
        X = [a * rate + sign * s_hit * b for a, b in zip(X, d)]
        slack = [s * rate + sign * s_hit * c for s, c in zip(slack, change)]
        q *= rate
        g = math.gcd(q, *X, *slack)
        if g > 1:
            X = [a // g for a in X]
            slack = [s // g for s in slack]
            q //= g
        if any(s < 0 for s in slack):
            raise InvariantViolation("ray shooting overshot a constraint")
        absorb(i for i, s in enumerate(slack) if s == 0 and i not in basis)

    basis_sorted = tuple(sorted(basis))
    B = [list(rows[r].coefficients) for r in basis_sorted]
    point = RationalPoint(Fraction(a, q) for a in X)
    return VertexCertificate(point, basis_sorted, det_exact(B))


# -- exact integer linear algebra


def _check_square(M) -> int:
    n = len(M)
    for row in M:
        if len(row) != n:
            raise NotSquare(f"matrix with {n} rows has a row of length {len(row)}")
    return n


def det_exact(M: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix by fraction-free (Bareiss) elimination.

    Every division is exact, so intermediate values stay integral.
    """
    n = _check_square(M)
    a = [[int(v) for v in row] for row in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        p = next((r for r in range(k, n) if a[r][k]), None)
        if p is None:
            return 0
        if p != k:
            a[k], a[p] = a[p], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1] if n else 1


def cramer_solve(B: Sequence[Sequence[int]], rhs: Sequence[int]) -> RationalPoint:
    n = _check_square(B)
    if len(rhs) != n:
        raise DimensionMismatch(f"right-hand side has length {len(rhs)}, matrix is {n}x{n}")
    D = det_exact(B)
    if D == 0:
        raise SingularMatrix("matrix is singular")
    y = []
    for i in range(n):
        Bi = [list(row[:i]) + [rhs[r]] + list(row[i + 1:]) for r, row in enumerate(B)]
        y.append(Fraction(det_exact(Bi), D))
    for row, target in zip(B, rhs):
        if sum(a * v for a, v in zip(row, y)) != target:
            raise InvariantViolation("Cramer solution fails back-substitution")
    return RationalPoint(y)
