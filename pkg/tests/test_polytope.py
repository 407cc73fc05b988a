from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from spectra import (
    Spectrum, TriangleProfile, build_system, contains, cramer_solve, det_exact,
    feasible_point, profile, purify_to_vertex,
)
from spectra.errors import (
    DimensionMismatch, InconsistentProfile, NotFeasible, NotSquare, SingularMatrix,
)
from spectra.polytope import RationalPoint

from strategies import cofactor_det, leibniz_det, spectra

F = Fraction


def system_of(*entries):
    return build_system(profile(Spectrum(entries)))


def rows(sys):
    return [(tuple(r.coefficients), r.rhs) for r in sys.rows]


def kinds(sys, idxs):
    return {str(sys.rows[r].kind) for r in idxs}


class TestBuildSystem:
    def test_member_triple(self):
        assert rows(system_of(1, 2)) == [((2, -1), 0), ((-1, 1), 1), ((1, 0), 1), ((0, 1), 1)]

    def test_non_member_triple(self):
        assert rows(system_of(1, 3)) == [((-2, 1), 1), ((-1, 1), 1), ((1, 0), 1), ((0, 1), 1)]

    def test_single_coordinate(self):
        assert rows(system_of(5)) == [((1,), 1)]

    def test_row_labels(self):
        assert [str(r.kind) for r in system_of(1, 2).rows] == ["TriplePos(1,1,2)", "Gap(1,2)", "Unit(1)", "Unit(2)"]

    def test_inconsistent_profile(self):
        with pytest.raises(InconsistentProfile):
            build_system(TriangleProfile.from_triples(3, [(1, 1, 3)]))

    @given(spectra(max_n=7))
    def test_row_count(self, x):
        n = len(x)
        sys = build_system(profile(x))
        # C(n,3) + C(n,2) triples, C(n,2) gaps, n units
        assert len(sys.rows) == n * (n - 1) * (n + 1) // 6 + n * (n - 1) // 2 + n
        assert [r.kind.tag for r in sys.rows] == sorted(
            (r.kind.tag for r in sys.rows), key=lambda t: ("Triple" not in t, t == "Unit"))

    def test_csv_header(self):
        text = system_of(1, 2).to_csv().splitlines()
        assert text[0].split(",")[0] == "kind"
        assert len(text) == 5


class TestContains:
    def test_examples(self):
        sys = system_of(1, 2)
        assert contains(sys, RationalPoint([1, 2]))
        assert not contains(sys, RationalPoint([1, 3]))

    def test_wrong_length(self):
        with pytest.raises(DimensionMismatch):
            contains(system_of(1, 2), RationalPoint([1, 2, 3]))


class TestFeasiblePoint:
    @pytest.mark.parametrize("x,expected", [
        ((1, 2), (1, 2)),
        ((F(1, 2), 1), (1, 2)),
        ((1, 3), (1, 3)),
    ])
    def test_examples(self, x, expected):
        assert feasible_point(Spectrum(x)).coords == tuple(F(v) for v in expected)

    @given(spectra(max_n=7))
    def test_is_feasible_scaling(self, x):
        p = feasible_point(x)
        assert contains(build_system(profile(x)), p)
        alpha = p.coords[0] / x.entries[0]
        assert alpha >= 1
        assert all(c == alpha * v for c, v in zip(p.coords, x.entries))


class TestPurify:
    def test_tight_start(self):
        sys = system_of(1, 2)
        cert = purify_to_vertex(sys, RationalPoint([1, 2]))
        assert cert.point.coords == (1, 2)
        active = {str(r.kind) for r in sys.rows if r.dot(cert.point.coords) == r.rhs}
        assert {"Unit(1)", "Gap(1,2)", "TriplePos(1,1,2)"} <= active
        assert len(cert.basis) == 2

    def test_negated_triple_vertex(self):
        sys = system_of(1, 3)
        cert = purify_to_vertex(sys, RationalPoint([1, 3]))
        assert cert.point.coords == (1, 3)
        assert kinds(sys, cert.basis) == {"TripleNeg(1,1,2)", "Unit(1)"}
        assert abs(cert.basis_det) == 1

    def test_one_dimension(self):
        cert = purify_to_vertex(system_of(5), RationalPoint([5]))
        assert cert.point.coords == (1,)

    def test_infeasible_start(self):
        with pytest.raises(NotFeasible):
            purify_to_vertex(system_of(1, 2), RationalPoint([1, 3]))

    @given(spectra(max_n=7))
    def test_certificate_verifies(self, x):
        sys = build_system(profile(x))
        cert = purify_to_vertex(sys, feasible_point(x, sys))
        cert.verify(sys)
        assert list(cert.basis) == sorted(cert.basis)
        assert profile(Spectrum(cert.point.coords)) == profile(x)

    @given(spectra(max_n=6), st.integers(1, 50))
    def test_deterministic(self, x, k):
        sys = build_system(profile(x))
        start = feasible_point(x, sys)
        assert purify_to_vertex(sys, start) == purify_to_vertex(sys, start)


square = st.integers(0, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-20, 20), min_size=n, max_size=n), min_size=n, max_size=n))


class TestDet:
    def test_identity(self):
        assert det_exact([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 1

    def test_two_by_two(self):
        assert det_exact([[2, -1], [-1, 1]]) == 1

    def test_duplicate_rows(self):
        assert det_exact([[1, 2, 3], [4, 5, 6], [1, 2, 3]]) == 0

    def test_zero_pivot_needs_swap(self):
        assert det_exact([[0, 1], [1, 0]]) == -1

    def test_not_square(self):
        with pytest.raises(NotSquare):
            det_exact([[1, 2]])

    def test_big_integers(self):
        M = [[10 ** 30, 1], [1, 10 ** 30]]
        assert det_exact(M) == 10 ** 60 - 1

    @given(square)
    def test_cofactor_oracle(self, M):
        assert det_exact(M) == cofactor_det(M)

    @given(square.filter(lambda M: len(M) <= 4))
    def test_leibniz_oracle(self, M):
        assert det_exact(M) == leibniz_det(M)


class TestCramer:
    def test_identity(self):
        assert cramer_solve([[1, 0], [0, 1]], [1, 2]).coords == (1, 2)

    def test_forward_substitution(self):
        assert cramer_solve([[1, 0], [-1, 1]], [1, 1]).coords == (1, 2)

    def test_gap_and_triple_rows(self):
        assert cramer_solve([[2, -1], [-1, 1]], [0, 1]).coords == (1, 2)

    def test_singular(self):
        with pytest.raises(SingularMatrix):
            cramer_solve([[1, 2], [2, 4]], [1, 1])

    def test_rhs_length(self):
        with pytest.raises(DimensionMismatch):
            cramer_solve([[1, 0], [0, 1]], [1])

    @given(square.filter(lambda M: len(M) >= 1), st.data())
    def test_back_substitution(self, M, data):
        assume(cofactor_det(M) != 0)
        b = data.draw(st.lists(st.integers(-20, 20), min_size=len(M), max_size=len(M)))
        y = cramer_solve(M, b).coords
        assert [sum(a * v for a, v in zip(row, y)) for row in M] == b
