from __future__ import annotations

from fractions import Fraction

import pytest

from convreg.chip import chip_report_at, chip_reports, points_of_interest, tangent_of_intersection
from convreg.errors import NotMemberError
from convreg.instances import (
    ball_tangency,
    box_pair,
    lines_45,
    random_cone_collection,
    right_angle,
    shrinking_intervals,
)
from convreg.polyhedra import HPolyhedron, same_set
from convreg.sets import Collection, NormContext

from conftest import cone


class TestChip:
    def test_ball_tangency_fails_every_property(self):
        r = chip_report_at(ball_tangency(), (0, 0), samples=2000)
        assert not r.chip and r.witnesses["chip"] == (1, 0)
        assert not r.chip_closure_variant and not r.strong_chip
        assert not r.normal_chip and not r.weak_normal_chip
        assert r.witness == (1, 0)

    def test_shrinking_family(self):
        r = chip_report_at(shrinking_intervals(), (0,))
        assert not r.chip and r.chip_closure_variant and r.normal_chip
        assert r.witnesses["chip"] == (1,)

    def test_right_angle_has_everything(self):
        r = chip_report_at(right_angle("linf"), (0, 0))
        assert r.chip and r.chip_closure_variant and r.strong_chip
        assert r.normal_chip and r.weak_normal_chip and r.normal_chip_constant == 1
        assert r.witness is None

    def test_lines_meeting_at_origin(self):
        r = chip_report_at(Collection(2, NormContext("linf"), lines_45().sets), (0, 0))
        assert r.chip and r.strong_chip and r.normal_chip

    def test_box_pair_corner(self):
        r = chip_report_at(box_pair(), (1, 1))
        assert r.chip and r.strong_chip

    def test_polyhedral_pair_touching_at_a_point(self):
        c = Collection(2, NormContext("linf"), (cone((1, -1), (-1, -1)), HPolyhedron.box(2, -1, 0)))
        r = chip_report_at(c, (0, 0))
        assert r.chip and r.strong_chip  # polyhedral collections always have both

    def test_requires_common_point(self):
        with pytest.raises(NotMemberError):
            tangent_of_intersection(right_angle("linf"), (1, 1))

    def test_points_of_interest_include_vertices(self):
        pts = points_of_interest(box_pair(), [(Fraction(3, 2), Fraction(3, 2))])
        assert pts[0] == (Fraction(3, 2), Fraction(3, 2))
        assert {(1, 1), (2, 2), (1, 2), (2, 1)} <= set(pts)
        assert len(chip_reports(box_pair())) == 4

    @pytest.mark.parametrize("seed", range(8))
    def test_polyhedral_cones_have_strong_chip(self, seed):
        c = random_cone_collection(seed)
        r = chip_report_at(c, (0,) * c.dim, samples=500)
        assert r.chip and r.strong_chip and r.weak_normal_chip
        assert same_set(tangent_of_intersection(c, (0,) * c.dim), c.intersection())
