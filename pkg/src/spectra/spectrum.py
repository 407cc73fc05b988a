"""Spectra, triangle profiles, equivalence and the 4-value condition.

All arithmetic is exact: entries are ``fractions.Fraction`` and decimal input
is converted without passing through floating point. Triple indices are
1-based and always satisfy ``i <= j < k``; every list of triples is in
lexicographic ``(i, j, k)`` order.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Sequence, Union

from .errors import (
    DimensionMismatch,
    EmptyInput,
    InconsistentProfile,
    MalformedToken,
    NonPositiveEntry,
    NonPositiveInput,
    NonPositiveScalar,
    NotStrictlyIncreasing,
)

Triple = tuple[int, int, int]

_RATIO = re.compile(r"[+-]?\d+/\d+")
_DECIMAL = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?")


def to_fraction(value) -> Fraction:
    """Coerce an int, Fraction or numeric string to an exact ``Fraction``.

    Floats are rejected: they cannot carry the exactness this package needs.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return _parse_token(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def _check_increasing(entries: Sequence) -> None:
    if not entries:
        raise EmptyInput("a spectrum needs at least one entry")
    if entries[0] <= 0:
        raise NonPositiveEntry(f"entry 1 is {entries[0]}, must be positive")
    for k in range(1, len(entries)):
        if entries[k] <= entries[k - 1]:
            raise NotStrictlyIncreasing(
                f"entry {k + 1} ({entries[k]}) does not exceed entry {k} ({entries[k - 1]})"
            )


@dataclass(frozen=True)
class Spectrum:
    """Strictly increasing vector of positive rationals."""

    entries: tuple[Fraction, ...]

    def __init__(self, entries: Iterable):
        values = tuple(to_fraction(v) for v in entries)
        _check_increasing(values)
        object.__setattr__(self, "entries", values)

    @property
    def n(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, index):
        return self.entries[index]

    def __str__(self) -> str:
        return format_spectrum(self)


@dataclass(frozen=True)
class IntegralSpectrum:
    """Strictly increasing vector of positive integers."""

    entries: tuple[int, ...]

    def __init__(self, entries: Iterable[int]):
        values = []
        for v in entries:
            if isinstance(v, Fraction):
                if v.denominator != 1:
                    raise MalformedToken(f"{v} is not an integer")
                v = v.numerator
            if isinstance(v, bool) or not isinstance(v, int):
                raise TypeError(f"integral spectrum entries must be int, got {type(v).__name__}")
            values.append(v)
        values = tuple(values)
        _check_increasing(values)
        object.__setattr__(self, "entries", values)

    @property
    def n(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, index):
        return self.entries[index]

    def __str__(self) -> str:
        return ",".join(str(v) for v in self.entries)

    def to_spectrum(self) -> Spectrum:
        return Spectrum(self.entries)


AnySpectrum = Union[Spectrum, IntegralSpectrum]


def _parse_token(token: str) -> Fraction:
    token = token.strip()
    if not (_RATIO.fullmatch(token) or _DECIMAL.fullmatch(token)):
        raise MalformedToken(f"cannot parse {token!r} as p/q or a decimal")
    try:
        return Fraction(token)
    except ZeroDivisionError:
        raise MalformedToken(f"zero denominator in {token!r}") from None


def parse_spectrum(text: str) -> Spectrum:
    """Parse comma separated ``p/q`` or decimal tokens, e.g. ``"1/2,0.75,2"``."""
    if not text or not text.strip():
        raise EmptyInput("empty spectrum text")
    tokens = text.split(",")
    if any(not t.strip() for t in tokens):
        raise MalformedToken(f"empty token in {text!r}")
    return Spectrum(_parse_token(t) for t in tokens)


def format_spectrum(x: AnySpectrum) -> str:
    return ",".join(str(v) for v in x.entries)


def is_metric_triple(a, b, c) -> bool:
    a, b, c = to_fraction(a), to_fraction(b), to_fraction(c)
    if a <= 0 or b <= 0 or c <= 0:
        raise NonPositiveInput(f"metric triple sides must be positive, got ({a}, {b}, {c})")
    return c <= a + b and b <= a + c and a <= b + c


# -- triples and profiles


@lru_cache(maxsize=None)
def triples(n: int) -> tuple[Triple, ...]:
    """All ``(i, j, k)`` with ``1 <= i <= j < k <= n`` in lexicographic order."""
    return tuple(
        (i, j, k)
        for i in range(1, n + 1)
        for j in range(i, n + 1)
        for k in range(j + 1, n + 1)
    )


@lru_cache(maxsize=None)
def triple_position(n: int) -> dict[Triple, int]:
    return {t: pos for pos, t in enumerate(triples(n))}


@dataclass(frozen=True)
class TriangleProfile:
    """Membership vector over ``triples(n)``; ``True`` means ``x_i + x_j >= x_k``."""

    n: int
    members: tuple[bool, ...]

    def __post_init__(self):
        if self.n < 1:
            raise InconsistentProfile("profile dimension must be at least 1")
        expected = len(triples(self.n))
        if len(self.members) != expected:
            raise InconsistentProfile(
                f"profile for n={self.n} needs {expected} membership flags, got {len(self.members)}"
            )

    @classmethod
    def from_triples(cls, n: int, member_triples: Iterable[Sequence[int]]) -> "TriangleProfile":
        pos = triple_position(n)
        flags = [False] * len(pos)
        for t in member_triples:
            t = tuple(int(v) for v in t)
            if t not in pos:
                raise InconsistentProfile(f"{t} is not a valid triple for n={n}")
            flags[pos[t]] = True
        return cls(n, tuple(flags))

    @classmethod
    def from_json(cls, data: dict) -> "TriangleProfile":
        return cls.from_triples(int(data["n"]), data["triples"])

    @property
    def triples(self) -> list[Triple]:
        return [t for t, m in zip(triples(self.n), self.members) if m]

    def __contains__(self, t) -> bool:
        return self.members[triple_position(self.n)[tuple(t)]]

    def to_json(self) -> dict:
        return {"n": self.n, "triples": [list(t) for t in self.triples]}


def profile(x: AnySpectrum) -> TriangleProfile:
    a = x.entries
    n = len(a)
    return TriangleProfile(
        n, tuple(a[i - 1] + a[j - 1] >= a[k - 1] for i, j, k in triples(n))
    )


def equivalent(x: AnySpectrum, y: AnySpectrum) -> bool:
    if len(x) != len(y):
        raise DimensionMismatch(f"cannot compare spectra of lengths {len(x)} and {len(y)}")
    return profile(x) == profile(y)


def scale(x: Spectrum, alpha) -> Spectrum:
    alpha = to_fraction(alpha)
    if alpha <= 0:
        raise NonPositiveScalar(f"scale factor must be positive, got {alpha}")
    return Spectrum(alpha * v for v in x.entries)


def _monotone_successors(t: Triple, n: int) -> list[Triple]:
    # single steps that stay inside the index domain; they generate the closure
    i, j, k = t
    out = []
    if i < j:
        out.append((i + 1, j, k))
    if j + 1 < k:
        out.append((i, j + 1, k))
    if k - 1 > j:
        out.append((i, j, k - 1))
    return out


def monotone_consistent(p: TriangleProfile) -> bool:
    """Whether membership is closed under raising ``i`` or ``j`` and lowering ``k``.

    Any realizable profile has this property, since the entries increase.
    """
    for t in p.triples:
        for s in _monotone_successors(t, p.n):
            if s not in p:
                return False
    return True


# -- the 4-value condition


@dataclass(frozen=True)
class CounterexampleReport:
    """First violation of the 4-value condition.

    ``first`` and ``second`` are 1-based entry indices of the metric triples
    ``(a, b, e)`` and ``(c, d, e)``; no entry ``f`` completes both
    ``(b, c, f)`` and ``(a, d, f)``.
    """

    first: Triple
    second: Triple
    values: tuple[tuple[Fraction, Fraction, Fraction], tuple[Fraction, Fraction, Fraction]]


def four_value_check(x: AnySpectrum) -> Union[bool, CounterexampleReport]:
    """Return ``True`` if the entry set has the 4-value condition, else the first failure."""
    s = [Fraction(v) for v in x.entries]
    n = len(s)
    idx = range(n)

    def metric(p, q, r):
        return r <= p + q and q <= p + r and p <= q + r

    compatible = [[[f for f in idx if metric(s[b], s[c], s[f])] for c in idx] for b in idx]
    for ia in idx:
        for ib in idx:
            for ie in idx:
                if not metric(s[ia], s[ib], s[ie]):
                    continue
                for ic in idx:
                    for id_ in idx:
                        if not metric(s[ic], s[id_], s[ie]):
                            continue
                        if any(metric(s[ia], s[id_], s[f]) for f in compatible[ib][ic]):
                            continue
                        return CounterexampleReport(
                            (ia + 1, ib + 1, ie + 1),
                            (ic + 1, id_ + 1, ie + 1),
                            ((s[ia], s[ib], s[ie]), (s[ic], s[id_], s[ie])),
                        )
    return True
