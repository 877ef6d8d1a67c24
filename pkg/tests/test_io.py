from __future__ import annotations

import glob
import json
import os
from fractions import Fraction

import pytest

from convreg import io as cio
from convreg.chip import chip_reports
from convreg.constants import compute_constants
from convreg.errors import EmptySetError, InstanceError
from convreg.instances import NAMED, right_angle
from convreg.theorems import DESCRIPTIONS, VerifyParams, cyclic_projection, verify

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
INSTANCE_FILES = sorted(glob.glob(os.path.join(ROOT, "instances", "*.json")))

MINIMAL = """{
  "space_dim": 1,
  "norm": {"kind": "linf", "mode": "exact", "tol": "0"},
  "sets": [
    {"type": "hpoly", "rows": [{"a": ["1"], "b": "BVALUE", "eq": false}]}
  ]
}"""


def _with(b: str) -> str:
    return MINIMAL.replace("BVALUE", b)


class TestParse:
    @pytest.mark.parametrize("path", INSTANCE_FILES, ids=os.path.basename)
    def test_round_trip(self, path):
        inst = cio.parse_instance(path)
        again = cio.parse_instance_text(cio.dumps_instance(inst))
        assert again == inst
        assert cio.dumps_instance(again) == cio.dumps_instance(inst)

    def test_shipped_instances_match_builders(self):
        names = {os.path.splitext(os.path.basename(p))[0] for p in INSTANCE_FILES}
        assert {"right_angle_linf", "ball_tangency", "shrinking_intervals", "lines_45"} <= names
        inst = cio.parse_instance(os.path.join(ROOT, "instances", "right_angle_linf.json"))
        assert inst.collection.sets == right_angle("linf").sets

    def test_minimal_defaults(self):
        inst = cio.parse_instance_text(_with("3/4"))
        assert inst.seed == 0 and inst.samples == 10_000 and inst.points == ()
        assert inst.collection.sets[0].rows[0].b == Fraction(3, 4)

    @pytest.mark.parametrize("bad", ["1/0", "x", "1.5e"])
    def test_bad_rational_reports_line_and_field(self, bad):
        with pytest.raises(InstanceError) as err:
            cio.parse_instance_text(_with(bad))
        assert err.value.line == 5
        assert err.value.field == "sets[0].rows[0].b"

    def test_number_instead_of_string(self):
        text = MINIMAL.replace('"BVALUE"', "0.5")
        with pytest.raises(InstanceError):
            cio.parse_instance_text(text)

    def test_dimension_mismatch(self):
        text = MINIMAL.replace('["1"]', '["1", "2"]').replace("BVALUE", "1")
        with pytest.raises(InstanceError) as err:
            cio.parse_instance_text(text)
        assert "expected 1 entries" in str(err.value)

    @pytest.mark.parametrize("mutation", [
        ('"linf"', '"l7"'),
        ('"hpoly"', '"blob"'),
        ('"space_dim": 1', '"space_dim": 0'),
        ('"eq": false', '"eq": "no"'),
    ])
    def test_invalid_fields(self, mutation):
        with pytest.raises(InstanceError):
            cio.parse_instance_text(_with("1").replace(*mutation))

    def test_missing_field(self):
        data = json.loads(_with("1"))
        del data["sets"][0]["rows"][0]["b"]
        with pytest.raises(InstanceError) as err:
            cio.parse_instance_text(json.dumps(data))
        assert err.value.field == "sets[0].rows[0].b"

    def test_empty_intersection(self, tmp_path):
        data = json.loads(_with("-1"))
        data["sets"].append({"type": "hpoly", "rows": [{"a": ["-1"], "b": "0", "eq": False}]})
        path = tmp_path / "empty.json"
        path.write_text(json.dumps(data))
        with pytest.raises(EmptySetError):
            cio.parse_instance(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(InstanceError):
            cio.parse_instance(tmp_path / "nope.json")

    def test_other_set_types(self):
        data = {
            "space_dim": 2,
            "norm": {"kind": "l2", "mode": "float", "tol": "0"},
            "sets": [
                {"type": "vpoly", "points": [["0", "0"], ["1", "0"]], "rays": [["0", "1"]]},
                {"type": "cone", "generators": [["1", "1"], ["1", "0"]]},
                {"type": "ball", "center": ["1/2", "0"], "radius": "1"},
            ],
        }
        inst = cio.parse_instance_text(json.dumps(data))
        assert cio.parse_instance_text(cio.dumps_instance(inst)) == inst


class TestReports:
    def test_fmt(self):
        assert cio.fmt(Fraction(3, 4)) == "3/4" and cio.fmt(Fraction(2)) == "2"
        assert cio.fmt(float("inf")) == "inf" and cio.fmt(True) == "true"
        assert cio.fmt((Fraction(1), Fraction(-1, 2))) == "1,-1/2" and cio.fmt(None) == ""

    def test_constants_csv(self):
        c = right_angle("linf")
        text = cio.constants_csv(c, compute_constants(c, samples=200))
        lines = text.splitlines()
        assert lines[0] == ",".join(cio.CONSTANTS_HEADER)
        assert lines[1] == "right_angle,linf,exact,1,1,1,1,1,1,1/1000000,200,0"

    def test_chip_csv(self):
        c = right_angle("linf")
        lines = cio.chip_csv(c, chip_reports(c, samples=200)).splitlines()
        assert lines[0] == ",".join(cio.CHIP_HEADER) and len(lines) == 2

    def test_trajectory_csv(self):
        c = NAMED["lines_45"]()
        lines = cio.trajectory_csv(cyclic_projection(c, (0, 1), 3)).splitlines()
        assert lines[0] == ",".join(cio.TRAJECTORY_HEADER) and len(lines) == 5

    def test_theorems_md(self):
        c = right_angle("linf")
        text = cio.theorems_md(c, [verify("cor_4_2", c, VerifyParams(samples=200))], DESCRIPTIONS)
        assert "## cor_4_2: PASS" in text
