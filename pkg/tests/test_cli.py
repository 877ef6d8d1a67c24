from __future__ import annotations

import json
import os
import subprocess
import sys

import pytest

from convreg.cli import EXIT_EMPTY, EXIT_OK, EXIT_UNSUPPORTED, EXIT_USAGE, main

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def inst(name: str) -> str:
    return os.path.join(ROOT, "instances", f"{name}.json")


def write(tmp_path, data: dict) -> str:
    p = tmp_path / "instance.json"
    p.write_text(json.dumps(data))
    return str(p)


def box(lo: str, hi: str) -> dict:
    return {"type": "hpoly", "rows": [{"a": ["1"], "b": hi, "eq": False},
                                      {"a": ["-1"], "b": f"-{lo}" if lo != "0" else "0", "eq": False}]}


class TestExitCodes:
    def test_constants(self, tmp_path, capsys):
        rc = main(["constants", inst("right_angle_linf"), "--samples", "200", "--out", str(tmp_path)])
        assert rc == EXIT_OK
        out = capsys.readouterr().out
        assert out == (tmp_path / "constants.csv").read_text()
        assert "right_angle,linf,exact,1,1,1,1,1,1" in out

    def test_chip(self, tmp_path, capsys):
        rc = main(["chip", inst("ball_tangency"), "--samples", "500", "--out", str(tmp_path)])
        assert rc == EXIT_OK
        assert 'ball_tangency,"0,0",false,false,false,false,1,false,"1,0"' in capsys.readouterr().out

    def test_verify(self, tmp_path, capsys):
        rc = main(["verify", inst("right_angle_linf"), "--theorems", "cor_4_2,thm_4_3",
                   "--samples", "200", "--out", str(tmp_path)])
        assert rc == EXIT_OK
        assert "## cor_4_2: PASS" in (tmp_path / "theorems.md").read_text()

    def test_cyclic(self, tmp_path):
        rc = main(["cyclic", inst("lines_45"), "--start", "0,1", "--cycles", "5", "--out", str(tmp_path)])
        assert rc == EXIT_OK
        assert len((tmp_path / "trajectory.csv").read_text().splitlines()) == 7

    def test_inverse_sum(self, tmp_path):
        rc = main(["inverse-sum", inst("box_and_quadrant"), "--out", str(tmp_path)])
        assert rc == EXIT_OK
        rows = json.loads((tmp_path / "inverse_sum.json").read_text())["rows"]
        assert len(rows) == 4

    def test_inverse_sum_without_origin(self, tmp_path):
        assert main(["inverse-sum", inst("box_pair"), "--out", str(tmp_path)]) == EXIT_USAGE

    def test_bad_rational(self, tmp_path):
        data = {"space_dim": 1, "sets": [box("0", "1/0")]}
        assert main(["chip", write(tmp_path, data), "--out", str(tmp_path)]) == EXIT_USAGE

    def test_mixed_dimensions(self, tmp_path):
        data = {"space_dim": 2, "sets": [box("0", "1")]}
        assert main(["chip", write(tmp_path, data), "--out", str(tmp_path)]) == EXIT_USAGE

    def test_empty_intersection(self, tmp_path):
        data = {"space_dim": 1, "norm": {"kind": "linf", "mode": "exact", "tol": "0"},
                "sets": [box("0", "1"), box("2", "3")]}
        assert main(["constants", write(tmp_path, data), "--out", str(tmp_path)]) == EXIT_EMPTY

    def test_l2_exact_inflation_unsupported(self, tmp_path):
        assert main(["constants", inst("lines_45"), "--out", str(tmp_path)]) == EXIT_UNSUPPORTED
        assert main(["verify", inst("lines_45"), "--out", str(tmp_path)]) == EXIT_UNSUPPORTED

    def test_family_constants_are_analytic(self, tmp_path, capsys):
        assert main(["constants", inst("shrinking_intervals"), "--out", str(tmp_path)]) == EXIT_OK
        assert "shrinking_intervals,l2,exact,1,1,,,1,1," in capsys.readouterr().out

    def test_unknown_theorem(self, tmp_path):
        assert main(["verify", inst("right_angle_linf"), "--theorems", "thm_9_9",
                     "--out", str(tmp_path)]) == EXIT_USAGE

    def test_point_dimension(self, tmp_path):
        assert main(["chip", inst("right_angle_linf"), "--point", "0,0,0",
                     "--out", str(tmp_path)]) == EXIT_USAGE

    @pytest.mark.parametrize("argv", [["frobnicate", "x.json"], ["constants"],
                                      ["constants", "x.json", "--tol", "abc"],
                                      ["cyclic", "x.json", "--cycles", "0"]])
    def test_usage_errors(self, argv):
        with pytest.raises(SystemExit) as err:
            main(argv)
        assert err.value.code == EXIT_USAGE


class TestEntryPoints:
    def test_module_and_python_backend(self, tmp_path):
        env = dict(os.environ, CONVREG_KERNELS="python")
        out = subprocess.run([sys.executable, "-m", "convreg", "cyclic", inst("lines_45"),
                              "--start", "0,1", "--cycles", "3", "--out", str(tmp_path)],
                             capture_output=True, text=True, env=env)
        assert out.returncode == 0 and out.stdout.startswith("cycle")
        probe = subprocess.run([sys.executable, "-c", "from convreg import kernels; print(kernels.BACKEND)"],
                               capture_output=True, text=True, env=env)
        assert probe.stdout.strip() == "python"
