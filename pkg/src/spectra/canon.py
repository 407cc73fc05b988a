"""Canonicalization pipeline: spectrum to vertex to bounded integral representatives.

``integral_representative`` scales a vertex of the spectral polyhedron by the
absolute determinant of its basis, giving an integral spectrum whose largest
entry is at most ``2^n``. ``conant_band`` rescales that to put the last
entry at exactly ``2^(n+1)`` and rounds up, which lands entry ``i`` in
``[2^i, 2^(n+1)]``. Every guaranteed bound is re-checked at runtime.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .errors import BoundViolation, EquivalenceViolation
from .polytope import ConstraintSystem, VertexCertificate, build_system, feasible_point, purify_to_vertex
from .spectrum import AnySpectrum, IntegralSpectrum, Spectrum, format_spectrum, profile


def _ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def vertex_of(x: AnySpectrum) -> tuple[ConstraintSystem, VertexCertificate]:
    sys = build_system(profile(x))
    cert = purify_to_vertex(sys, feasible_point(x, sys))
    cert.verify(sys)
    return sys, cert


def _check_equivalent(y: AnySpectrum, x: AnySpectrum, what: str) -> None:
    if profile(y) != profile(x):
        raise EquivalenceViolation(f"{what} {format_spectrum(y)} is not equivalent to {format_spectrum(x)}")


def internal_bound_holds(v) -> bool:
    """``2^(n-i+1) v_i >= v_n`` for every ``i < n`` (1-based)."""
    n = len(v)
    return all(2 ** (n - i + 1) * v[i - 1] >= v[n - 1] for i in range(1, n))


def rational_representative(x: AnySpectrum) -> Spectrum:
    _, cert = vertex_of(x)
    y = Spectrum(cert.point.coords)
    _check_equivalent(y, x, "vertex")
    return y


def _lift(x: AnySpectrum) -> tuple[VertexCertificate, IntegralSpectrum]:
    _, cert = vertex_of(x)
    v = cert.point.coords
    n = len(v)
    if not internal_bound_holds(v):
        raise BoundViolation(f"vertex {[str(c) for c in v]} breaks 2^(n-i+1) v_i >= v_n")
    D = abs(cert.basis_det)
    scaled = [D * c for c in v]
    if any(c.denominator != 1 for c in scaled):
        raise BoundViolation(f"|det B| * vertex is not integral: {[str(c) for c in scaled]}")
    y = IntegralSpectrum(c.numerator for c in scaled)
    _check_equivalent(y, x, "lifted spectrum")
    if y[-1] > 2 ** n:
        raise BoundViolation(f"lifted spectrum {y} has last entry above 2^{n}")
    if not internal_bound_holds(y.entries):
        raise BoundViolation(f"lifted spectrum {y} breaks 2^(n-i+1) y_i >= y_n")
    return cert, y


def integral_representative(x: AnySpectrum) -> IntegralSpectrum:
    return _lift(x)[1]


def _band_from(z: IntegralSpectrum, x: AnySpectrum) -> IntegralSpectrum:
    n = len(z)
    c = Fraction(2 ** (n + 1), z[-1])
    y = IntegralSpectrum(_ceil(c * zi) for zi in z)
    if y[-1] != 2 ** (n + 1):
        raise BoundViolation(f"band spectrum {y} does not end at 2^{n + 1}")
    for i in range(1, n + 1):
        if not 2 ** i <= y[i - 1] <= 2 ** (n + 1):
            raise BoundViolation(f"band entry {i} = {y[i - 1]} is outside [2^{i}, 2^{n + 1}]")
    _check_equivalent(y, x, "band spectrum")
    return y


def conant_band(x: AnySpectrum) -> IntegralSpectrum:
    return _band_from(integral_representative(x), x)


@dataclass(frozen=True)
class BoundsChecked:
    upper: bool
    internal: bool
    band: bool


@dataclass(frozen=True)
class CanonReport:
    input: Spectrum
    vertex: VertexCertificate
    lifted: IntegralSpectrum
    conant_band: IntegralSpectrum
    bounds_checked: BoundsChecked

    def to_json(self, sys: ConstraintSystem | None = None) -> dict:
        if sys is None:
            sys = build_system(profile(self.input))
        return {
            "version": __version__,
            "input": [str(v) for v in self.input.entries],
            "vertex": {
                "point": [str(v) for v in self.vertex.point.coords],
                "basis": [str(sys.rows[r].kind) for r in self.vertex.basis],
                "basis_det": self.vertex.basis_det,
            },
            "lifted": list(self.lifted.entries),
            "conant_band": list(self.conant_band.entries),
            "bounds_checked": {
                "upper": self.bounds_checked.upper,
                "internal": self.bounds_checked.internal,
                "band": self.bounds_checked.band,
            },
        }


def canonicalize(x: AnySpectrum) -> CanonReport:
    if isinstance(x, IntegralSpectrum):
        x = x.to_spectrum()
    cert, lifted = _lift(x)
    band = _band_from(lifted, x)
    n = len(x)
    checks = BoundsChecked(
        upper=lifted[-1] <= 2 ** n,
        internal=internal_bound_holds(lifted.entries),
        band=band[-1] == 2 ** (n + 1) and all(2 ** i <= band[i - 1] <= 2 ** (n + 1) for i in range(1, n + 1)),
    )
    return CanonReport(x, cert, lifted, band, checks)
