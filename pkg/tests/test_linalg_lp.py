from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from convreg import linalg as la
from convreg.lp import linprog

from conftest import small_fraction


class TestLinalg:
    def test_as_fraction_accepts_strings_and_ints(self):
        assert la.as_fraction("3/4") == Fraction(3, 4)
        assert la.as_fraction(2) == Fraction(2)

    def test_primitive_scales_to_coprime_integers(self):
        assert la.primitive((Fraction(2, 3), Fraction(4, 3))) == (1, 2)
        assert la.primitive_int((4, -6)) == (2, -3)

    def test_rank_and_nullspace(self):
        rows = [(1, 2, 3), (2, 4, 6), (0, 1, 1)]
        assert la.rank(rows) == 2
        for v in la.nullspace(rows, 3):
            assert all(la.dot(r, v) == 0 for r in rows)

    def test_solve_returns_none_when_singular(self):
        assert la.solve([(1, 1), (2, 2)], (1, 3)) is None
        assert la.solve([(2, 0), (0, 4)], (1, 1)) == (Fraction(1, 2), Fraction(1, 4))

    @given(st.lists(st.lists(small_fraction, min_size=3, max_size=3), min_size=1, max_size=4))
    def test_rank_plus_nullity(self, rows):
        assert la.rank(rows) + len(la.nullspace(rows, 3)) == 3


class TestLinprog:
    def test_box_optimum(self):
        ineq = [((1, 0), 1), ((-1, 0), 0), ((0, 1), 2), ((0, -1), 0)]
        out = linprog((1, 1), ineq)
        assert out.status == "optimal" and out.value == 3 and out.point == (1, 2)

    def test_minimize_and_equalities(self):
        out = linprog((1, 2), [((-1, 0), 0), ((0, -1), 0)], eq=[((1, 1), 1)], maximize=False)
        assert out.value == 1 and out.point == (1, 0)

    def test_unbounded_and_infeasible(self):
        assert linprog((1,), [((-1,), 0)]).status == "unbounded"
        assert linprog((1,), [((1,), -1), ((-1,), -1)]).status == "infeasible"

    def test_degenerate_cycling_example(self):
        # Beale's example cycles without an anti-cycling rule
        obj = (Fraction(3, 4), -150, Fraction(1, 50), -6)
        ineq = [((Fraction(1, 4), -60, Fraction(-1, 25), 9), 0),
                ((Fraction(1, 2), -90, Fraction(-1, 50), 3), 0),
                ((0, 0, 1, 0), 1)]
        ineq += [(tuple(-int(i == j) for j in range(4)), 0) for i in range(4)]
        out = linprog(obj, ineq)
        assert out.status == "optimal" and out.value == Fraction(1, 20)

    def test_rejects_mismatched_objective(self):
        with pytest.raises(ValueError):
            linprog((1, 2), [((1, 0), 1)], dim=3)

    @given(st.lists(small_fraction, min_size=2, max_size=2), small_fraction, small_fraction)
    def test_optimum_is_feasible_and_beats_vertices(self, c, u, v):
        lo, hi = min(u, v), max(u, v)
        ineq = [((1, 0), hi), ((-1, 0), -lo), ((0, 1), hi), ((0, -1), -lo)]
        out = linprog(c, ineq)
        assert out.status == "optimal"
        assert all(la.dot(a, out.point) <= b for a, b in ineq)
        corners = [(x, y) for x in (lo, hi) for y in (lo, hi)]
        assert out.value == max(la.dot(c, p) for p in corners)
