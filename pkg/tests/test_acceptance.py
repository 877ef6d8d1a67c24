"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line."""
from __future__ import annotations

import filecmp
import glob
import json
import os
import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from convreg.chip import chip_report_at
from convreg.constants import (
    INF,
    dual_cones_of,
    gamma_estimate,
    lambda_D,
    lambda_G,
    lambda_N,
    lambda_UN,
)
from convreg.instances import (
    ball_tangency,
    cone_suite,
    lines_45,
    pair_suite,
    polyhedral_suite,
    polytope_suite,
    right_angle,
    shrinking_intervals,
)
from convreg.polyhedra import canonicalize, minkowski_sum, polar, recession_cone
from convreg.sets import inverse_sum, inverse_sum_membership
from convreg.theorems import (
    NOT_MET,
    PASS,
    VerifyParams,
    cyclic_projection,
    eta_grid,
    inclusion_chain_violations,
    verify,
)

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

# pinned tolerances
CONST_TOL = 2e-6  # |lambda_N - lambda_D|, |lambda_N - lambda_G|
SUITE_SECONDS = 60.0
L2_LAMBDA, L2_LAMBDA_TOL = 0.70711, 1e-4
L2_GAMMA_RANGE = (1.41, 1.4143)
GAMMA_REL = 1e-6  # gamma_lb <= (1/lambda_UN)(1 + GAMMA_REL)
GAMMA_FLOOR = 0.95  # gamma_lb >= GAMMA_FLOOR / lambda_UN
SAMPLES = 10_000
SEED = 0
TANGENCY_GAMMA_MIN = 1e3
RATE, RATE_TOL = 0.5, 0.05
POINTS_PER_PAIR = 1000


@pytest.fixture
def emit(capsys):
    def _emit(number: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\ncriterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return _emit


@pytest.fixture(scope="module")
def cones():
    return cone_suite(20, seed=SEED, kind="linf")


def _gap(a, b) -> float:
    if a == INF or b == INF:
        return 0.0 if a == b else INF
    return abs(float(a) - float(b))


def test_criterion_01_cone_constants_agree(cones, emit):
    start = time.perf_counter()
    worst = 0.0
    for c in cones:
        dual = dual_cones_of(c)
        ln = lambda_N(c, samples=SAMPLES, seed=SEED)
        worst = max(worst, _gap(ln, lambda_D(dual, c.norm)), _gap(ln, lambda_G(dual, c.norm)))
    elapsed = time.perf_counter() - start
    emit(1, worst <= CONST_TOL and elapsed < SUITE_SECONDS,
         f"max gap {worst:.2e} (<= {CONST_TOL:.0e}), {elapsed:.1f}s (< {SUITE_SECONDS:.0f}s)")


def test_criterion_02_right_angle(emit):
    c = right_angle("linf")
    dual = dual_cones_of(c)
    exact = (lambda_N(c), lambda_D(dual, c.norm), lambda_G(dual, c.norm))
    e = right_angle("l2")
    ln = lambda_N(e, samples=SAMPLES, seed=SEED)
    lg = lambda_G(dual_cones_of(e), e.norm, samples=SAMPLES, seed=SEED)
    glb, _ = gamma_estimate(e, samples=SAMPLES, seed=SEED)
    ok = (all(v == 1 and isinstance(v, Fraction) for v in exact)
          and abs(ln - L2_LAMBDA) <= L2_LAMBDA_TOL and abs(lg - L2_LAMBDA) <= L2_LAMBDA_TOL
          and L2_GAMMA_RANGE[0] <= glb <= L2_GAMMA_RANGE[1])
    emit(2, ok, f"linf {tuple(str(v) for v in exact)}; l2 lambda_N={ln:.6f} lambda_G={lg:.6f} "
                f"gamma_lb={glb:.6f}")


def test_criterion_03_gamma_reciprocal(cones, emit):
    bad = []
    for c in cones:
        lun, kind = lambda_UN(c, samples=SAMPLES, seed=SEED)
        glb, gub = gamma_estimate(c, samples=SAMPLES, seed=SEED, lambda_un=(lun, kind))
        inv = 0.0 if lun == INF else 1 / float(lun)
        if not (kind == "cone-equal" and glb <= inv * (1 + GAMMA_REL) and glb >= GAMMA_FLOOR * inv):
            bad.append((c.name, glb, inv))
    emit(3, not bad, f"{len(cones) - len(bad)}/{len(cones)} instances within "
                     f"[{GAMMA_FLOOR}/lambda_UN, (1+{GAMMA_REL:.0e})/lambda_UN] {bad[:2]}")


def test_criterion_04_bipolar(emit):
    suite = polytope_suite(100, seed=SEED)
    fails = [k for k, p in enumerate(suite) if canonicalize(polar(polar(p))) != canonicalize(p)]
    emit(4, not fails, f"{len(suite) - len(fails)}/{len(suite)} polytopes satisfy the bipolar identity")


def test_criterion_05_inverse_sum_duality(emit):
    pairs = pair_suite(50, seed=SEED)
    sum_fail = absorb_fail = 0
    for a, b in pairs:
        if canonicalize(polar(minkowski_sum(a, b))) != canonicalize(inverse_sum(polar(a), polar(b))):
            sum_fail += 1
        k = recession_cone(a)
        if canonicalize(inverse_sum(k, b)) != canonicalize(k.intersect(b)):
            absorb_fail += 1
    emit(5, sum_fail == absorb_fail == 0,
         f"polar-of-sum failures {sum_fail}/50, cone absorption failures {absorb_fail}/50")


def _sample_points(rng: random.Random, target, n: int, count: int) -> list[tuple]:
    """Uniform rationals plus points on and near the boundary of the target."""
    v = target.to_v()
    anchors = list(v.points) + [tuple(p + r for p, r in zip(v.points[0], ray)) for ray in v.rays]
    out = []
    for k in range(count):
        if k % 2 == 0 or not anchors:
            out.append(tuple(Fraction(rng.randint(-24, 24), rng.choice((1, 2, 4, 8))) for _ in range(n)))
        else:
            base = rng.choice(anchors)
            t = rng.choice((Fraction(1), Fraction(1), Fraction(7, 8), Fraction(9, 8), Fraction(1, 2)))
            out.append(tuple(t * x for x in base))
    return out


def test_criterion_06_inverse_sum_membership(emit):
    rng = random.Random(SEED)
    total = agree = 0
    for a, b in pair_suite(50, seed=SEED):
        route = inverse_sum(a, b)
        for x in _sample_points(rng, route, a.dim, POINTS_PER_PAIR):
            total += 1
            agree += inverse_sum_membership(a, b, x) == route.contains(x)
    emit(6, agree == total, f"{agree}/{total} points agree ({100 * agree / total:.2f}%)")


def test_criterion_07_chip_failures(emit):
    tang = chip_report_at(ball_tangency(), (0, 0), samples=SAMPLES, seed=SEED)
    t_glb, _ = gamma_estimate(ball_tangency(), samples=SAMPLES, seed=SEED)
    fam = shrinking_intervals()
    f = chip_report_at(fam, (0,))
    f_gamma = gamma_estimate(fam)
    f_status = verify("thm_5_5", fam).status
    ok = (not tang.chip and tang.witnesses.get("chip") == (1, 0) and t_glb > TANGENCY_GAMMA_MIN
          and not f.chip and f.chip_closure_variant and f_gamma == (1.0, 1.0) and f_status == NOT_MET)
    witness = ",".join(str(v) for v in tang.witnesses.get("chip", ()))
    emit(7, ok, f"tangency chip={tang.chip} witness=({witness}) gamma_lb={t_glb:.3g}; "
                f"family chip={f.chip} closure={f.chip_closure_variant} gamma={f_gamma} thm_5_5={f_status}")


def test_criterion_08_chip_chain(cones, emit):
    bad = []
    for c in cones:
        # the apex stands in for the vertex when the intersection contains a line
        params = VerifyParams(samples=SAMPLES, seed=SEED, points=((Fraction(0),) * c.dim,))
        for tid in ("prop_5_1", "thm_5_1", "thm_5_4"):
            status = verify(tid, c, params).status
            if status != PASS:
                bad.append((c.name, tid, status))
    emit(8, not bad, f"{3 * len(cones) - len(bad)}/{3 * len(cones)} checks pass {bad[:3]}")


def test_criterion_09_inclusion_chain(emit):
    suite = polyhedral_suite(20, seed=SEED)
    grid = eta_grid()
    violations = [v for c in suite for v in inclusion_chain_violations(c, grid)]
    emit(9, not violations, f"{len(violations)} violations over {len(suite)} instances x "
                            f"{len(grid)} grid values {violations[:3]}")


def test_criterion_10_cyclic_projection(emit):
    t = cyclic_projection(lines_45(), (0, 1), 50)
    ok = t.rate is not None and abs(t.rate - RATE) <= RATE_TOL and t.fejer
    emit(10, ok, f"fitted rate {t.rate:.6f} (target {RATE} +- {RATE_TOL}), Fejer monotone: {t.fejer}")


def _cli_run(out_dir: str) -> list[tuple]:
    results = []
    for path in sorted(glob.glob(os.path.join(ROOT, "instances", "*.json"))):
        name = os.path.splitext(os.path.basename(path))[0]
        dim = json.load(open(path))["space_dim"]
        runs = [["constants"], ["chip"], ["verify"], ["inverse-sum"],
                ["cyclic", "--start", ",".join(["1"] * dim), "--cycles", "10"]]
        for extra in runs:
            proc = subprocess.run([sys.executable, "-m", "convreg", extra[0], path, *extra[1:],
                                   "--seed", str(SEED), "--out", os.path.join(out_dir, name)],
                                  capture_output=True)
            results.append((name, extra[0], proc.returncode, proc.stdout))
    return results


def test_criterion_11_determinism(tmp_path, emit):
    a, b = tmp_path / "a", tmp_path / "b"
    first, second = _cli_run(str(a)), _cli_run(str(b))
    files = sorted(os.path.relpath(p, a) for p in glob.glob(str(a / "*" / "*")))
    match, mismatch, errors = filecmp.cmpfiles(a, b, files, shallow=False)
    ok = first == second and not mismatch and not errors and len(files) > 0
    emit(11, ok, f"{len(match)}/{len(files)} report files and {len(first)} stdout streams identical")
