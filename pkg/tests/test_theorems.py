from __future__ import annotations

from fractions import Fraction

import pytest

from convreg.errors import UnsupportedError
from convreg.instances import (
    ball_tangency,
    box_pair,
    lines_45,
    orthogonal_lines,
    polyhedral_suite,
    random_cone_collection,
    right_angle,
    shrinking_intervals,
    whole_space,
)
from convreg.theorems import (
    DESCRIPTIONS,
    FAIL,
    NOT_MET,
    PASS,
    THEOREMS,
    UNSUPPORTED,
    VerifyParams,
    cyclic_projection,
    dual_inclusion,
    eta_grid,
    fit_rate,
    inclusion_chain_violations,
    primal_inclusion,
    verify,
)

FAST = VerifyParams(samples=1000)


class TestRegistry:
    def test_descriptions_cover_registry(self):
        assert set(DESCRIPTIONS) == set(THEOREMS)
        assert len(THEOREMS) == 13

    def test_unknown_id(self):
        with pytest.raises(KeyError):
            verify("thm_9_9", right_angle("linf"))


class TestStatuses:
    @pytest.mark.parametrize("tid", sorted(THEOREMS))
    def test_right_angle_linf_passes(self, tid):
        assert verify(tid, right_angle("linf"), FAST).status in (PASS, NOT_MET)

    @pytest.mark.parametrize("tid", sorted(THEOREMS))
    def test_whole_space_never_fails(self, tid):
        assert verify(tid, whole_space(), FAST).status != FAIL

    @pytest.mark.parametrize("tid", sorted(THEOREMS))
    def test_box_pair_never_fails(self, tid):
        assert verify(tid, box_pair(), FAST).status != FAIL

    def test_ball_tangency_not_met(self):
        r = verify("thm_5_4", ball_tangency(), FAST)
        assert r.status == NOT_MET and "CHIP" in r.details["reason"]

    def test_family_not_met(self):
        assert verify("thm_5_5", shrinking_intervals(), FAST).status == NOT_MET

    def test_unsupported_reported(self):
        r = verify("thm_4_2", right_angle("l2"), FAST)
        assert r.status in (UNSUPPORTED, NOT_MET)

    @pytest.mark.parametrize("seed", range(4))
    @pytest.mark.parametrize("tid", ["cor_4_1", "cor_4_2", "thm_4_3", "prop_3_1", "thm_5_3"])
    def test_random_cones_pass(self, seed, tid):
        assert verify(tid, random_cone_collection(seed), FAST).status == PASS


class TestInclusionChain:
    def test_grid_shape(self):
        g = eta_grid()
        assert len(g) == 21 and g[0] == Fraction(1, 10) and g[-1] == 10
        assert list(g) == sorted(g)

    def test_right_angle_primal_and_dual(self):
        c = right_angle("linf")
        assert primal_inclusion(c, Fraction(1))
        assert not primal_inclusion(c, Fraction(2))
        assert dual_inclusion(c, Fraction(1, 2))

    @pytest.mark.parametrize("c", polyhedral_suite(3, seed=7), ids=lambda c: c.name)
    def test_no_violations(self, c):
        assert inclusion_chain_violations(c, eta_grid()[::4]) == []


class TestCyclicProjection:
    def test_lines_at_45_degrees(self):
        t = cyclic_projection(lines_45(), (0, 1), 20)
        assert t.fejer
        assert t.rate == pytest.approx(0.5)
        assert all(r == pytest.approx(0.5) for r in t.ratios[1:])
        assert t.errors[-1] < t.errors[0]

    def test_orthogonal_lines_converge_in_one_cycle(self):
        t = cyclic_projection(orthogonal_lines(), (3, 4), 3)
        assert t.errors[1] == 0 and t.rate == 0.0

    def test_float_mode_matches_exact(self):
        from convreg.sets import Collection, NormContext

        c = lines_45()
        cf = Collection(2, NormContext("l2", "float"), c.sets)
        te, tf = cyclic_projection(c, (0, 1), 10), cyclic_projection(cf, (0, 1), 10)
        assert [float(e) for e in te.errors] == pytest.approx(tf.errors)

    def test_invalid(self):
        with pytest.raises(ValueError):
            cyclic_projection(lines_45(), (0, 1), 0)
        with pytest.raises(UnsupportedError):
            cyclic_projection(shrinking_intervals(), (1,), 3)

    def test_fit_rate(self):
        assert fit_rate([2.0 ** -k for k in range(10)]) == pytest.approx(0.5)
        assert fit_rate([1.0, 0.0, 0.0]) == 0.0
        assert fit_rate([1.0]) is None
