from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from convreg import linalg as la
from convreg.errors import EmptySetError, UnsupportedError
from convreg.polyhedra import HPolyhedron
from convreg.projection import DistanceOracle, exact_distance, inflate, project
from convreg.sets import Ball, NormContext, ShrinkingIntervalFamily, norm_value

from conftest import points, sets_with_origin

L2 = NormContext("l2", "exact")


class TestEuclidean:
    def test_box(self):
        r = project(HPolyhedron.box(2, 0, 1), (2, Fraction(1, 2)), L2)
        assert r.point == (1, Fraction(1, 2)) and r.distance == 1

    def test_irrational_distance_stays_exact_in_square(self):
        r = project(HPolyhedron.box(2, 0, 1), (2, 2), L2)
        assert r.sq_distance == 2 and r.distance == pytest.approx(2 ** 0.5)

    def test_empty(self):
        with pytest.raises(EmptySetError):
            project(HPolyhedron.empty(2), (0, 0), L2)

    @given(sets_with_origin(), st.data())
    def test_variational_inequality(self, s, data):
        x = data.draw(points(s.dim))
        y = project(s, x, L2).point
        assert s.contains(y)
        d = la.sub(x, y)
        v = s.to_v()
        assert all(la.dot(d, la.sub(p, y)) <= 0 for p in v.points)
        assert all(la.dot(d, r) <= 0 for r in v.rays)

    @given(sets_with_origin(), st.data())
    def test_float_mode_matches_exact(self, s, data):
        x = data.draw(points(s.dim))
        exact = project(s, x, L2).sq_distance
        approx = project(s, x, NormContext("l2", "float")).distance
        assert approx == pytest.approx(float(exact) ** 0.5, abs=1e-9)

    def test_ball_float_and_exact(self):
        b = Ball((Fraction(0), Fraction(0)), Fraction(1))
        r = project(b, (3, 4), NormContext("l2", "float"))
        assert r.distance == pytest.approx(4.0) and r.point == pytest.approx((0.6, 0.8))
        with pytest.raises(UnsupportedError):
            project(b, (3, 4), L2)

    def test_family_member_and_limit(self):
        f = ShrinkingIntervalFamily()
        assert project(f, (1,), L2, index=2).distance == Fraction(1, 2)
        assert project(f, (1,), L2).distance == 1


class TestPolyhedralNorms:
    @pytest.mark.parametrize("kind", ["l1", "linf"])
    @given(s=sets_with_origin(), data=st.data())
    def test_dual_formula_matches_lp_projection(self, kind, s, data):
        x = data.draw(points(s.dim))
        r = project(s, x, NormContext(kind, "exact"))
        assert s.contains(r.point)
        assert norm_value(kind, la.sub(x, r.point)) == r.distance
        assert exact_distance(s, x, kind) == r.distance

    @pytest.mark.parametrize("kind", ["l1", "linf"])
    @given(s=sets_with_origin(), data=st.data())
    def test_inflation_is_distance_sublevel(self, kind, s, data):
        x = data.draw(points(s.dim))
        eta = Fraction(data.draw(st.integers(0, 8)), 4)
        assert inflate(s, eta, kind).contains(x) == (exact_distance(s, x, kind) <= eta)

    def test_linf_distance_of_corner(self):
        q = HPolyhedron.from_constraints(2, [((1, 0), 0), ((0, 1), 0)])
        assert exact_distance(q, (1, 1), "linf") == 1
        assert exact_distance(q, (1, 1), "l1") == 2


class TestOracle:
    @pytest.mark.parametrize("kind", ["l1", "linf", "l2"])
    @given(s=sets_with_origin(), data=st.data())
    def test_batch_matches_exact(self, kind, s, data):
        xs = [data.draw(points(s.dim)) for _ in range(5)]
        got = DistanceOracle(s, kind).batch(np.array([[float(v) for v in x] for x in xs]))
        norm = NormContext(kind, "exact")
        want = [float(project(s, x, norm).distance) for x in xs]
        assert got == pytest.approx(want, abs=1e-9)

    def test_ball_distance_precise_near_sphere(self):
        b = Ball((Fraction(0), Fraction(1)), Fraction(1))
        d = DistanceOracle(b, "l2").batch(np.array([[1e-6, 0.0]]))[0]
        assert d == pytest.approx(5e-13, rel=1e-6)

    def test_exact_needs_polyhedral_norm(self):
        with pytest.raises(UnsupportedError):
            DistanceOracle(HPolyhedron.box(1, 0, 1), "l2").exact((2,))
