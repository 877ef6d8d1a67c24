"""Instance-level verification of the regularity theorems, and cyclic projections.

Each check evaluates both sides of an equivalence or implication through
independent computations (primal inclusions, dual inclusions built from
polars and inverse sums, decompositions, sampled error bounds) and
reports pass only when every tested direction agrees.  Hypotheses are
checked first; an instance that does not meet them is reported as
``hypothesis_not_met`` rather than as a counterexample.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import Callable, Sequence

from . import linalg as la
from .chip import chip_report_at, points_of_interest
from .constants import (
    DEFAULT_DELTA_GRID,
    DEFAULT_TOL,
    INF,
    UNCONSTRAINED,
    gamma_estimate,
    lambda_D,
    lambda_G,
    lambda_N,
    lambda_UN,
    normality_inclusion_holds,
    weak_normal_eta,
    dual_cones_of,
)
from .errors import UnsupportedError
from .polyhedra import HPolyhedron, VPolyhedron, convex_hull_union, inclusion, polar
from .projection import project
from .sets import (
    Collection,
    GeneratedCone,
    inverse_sum,
    norm_value,
    normal_cone,
    tangent_cone,
    unit_ball_h,
)

PASS, FAIL, NOT_MET, UNSUPPORTED = "pass", "fail", "hypothesis_not_met", "unsupported"


@dataclass(frozen=True)
class VerifyParams:
    tol: Fraction = DEFAULT_TOL
    samples: int = 10_000
    seed: int = 0
    delta_grid: tuple = DEFAULT_DELTA_GRID
    points: tuple = ()
    functionals: int = 8


@dataclass
class TheoremReport:
    theorem_id: str
    status: str
    details: dict = field(default_factory=dict)
    witness: object = None


class _Fail(Exception):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class _NotMet(Exception):
    pass


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise _NotMet(message)


def _check(cond: bool, message: str, witness=None) -> None:
    if not cond:
        raise _Fail(message, witness)


def _require_polyhedral(c: Collection) -> None:
    if not c.norm.polyhedral:
        raise UnsupportedError("this check needs a polyhedral norm (l1 or linf)")
    if not c.all_polyhedral or c.is_infinite:
        raise UnsupportedError("this check needs a finite collection of polyhedra")


def _positive(v) -> bool:
    return v is not None and v > 0


def _close(a, b, tol) -> bool:
    if a == INF or b == INF:
        return a == b
    return abs(float(a) - float(b)) <= float(tol)


def _cmp_tol(c: Collection, p: VerifyParams):
    """Tolerance for comparing two constants: 2*bisect_tol, or 1e-3 when sampled."""
    return 2 * p.tol if c.norm.polyhedral else 1e-3


def _functionals(c: Collection, p: VerifyParams) -> list[tuple]:
    rng = random.Random(p.seed)
    out = []
    for h in c.hforms():
        for r in h.rows:
            out.append(r.a)
            if r.eq:
                out.append(la.neg(r.a))
    while len(out) < len(set(out)) + p.functionals:
        v = tuple(Fraction(rng.randint(-3, 3)) for _ in range(c.dim))
        if any(v):
            out.append(v)
    seen, uniq = set(), []
    for f in out:
        if f not in seen:
            seen.add(f)
            uniq.append(f)
    return uniq


def _dual_ball(c: Collection) -> HPolyhedron:
    return unit_ball_h(c.norm.dual_kind, c.dim)


# ---------------------------------------------------------------------------
# normal property and its dual forms
# ---------------------------------------------------------------------------

def _prop_3_1(c: Collection, p: VerifyParams, d: dict) -> None:
    _require(c.is_cone_collection, "needs a collection of cones")
    ln = lambda_N(c, p.tol, p.samples, p.seed)
    d["lambda_N"] = ln
    deltas = (Fraction(1, 4), Fraction(1), Fraction(4))
    if c.norm.polyhedral:
        # (i) normal at lambda_N <=> uniform normal at the same constant
        if ln == INF:
            eta = Fraction(2**20)
        else:
            eta = ln
        if eta > 0:
            for delta in deltas:
                res = normality_inclusion_holds(c, eta, delta)
                _check(res.holds, f"uniform inclusion fails at delta={delta}", res.witness)
        else:
            for delta in deltas:
                res = normality_inclusion_holds(c, p.tol, delta)
                _check(not res.holds, f"uniform inclusion holds at delta={delta} although not normal")
        d["uniform_deltas"] = deltas
    # (ii) normal => weak normal with eta_{x*} >= lambda_N / max(1, |x*|_*)
    if ln == 0:
        d["weak_normal"] = "not implied"
        return
    slack = p.tol if c.norm.polyhedral else 1e-3
    worst = None
    for f in _functionals(c, p):
        eta = weak_normal_eta(c, f, p.tol, p.samples, p.seed)
        if eta == UNCONSTRAINED or eta == INF:
            continue
        bound = ln if ln == INF else ln / max(1, norm_value(c.norm.dual_kind, f))
        _check(eta is not None and float(eta) + float(slack) >= float(bound) * (1 - 1e-12),
               f"weak normal constant {eta} below {bound}", f)
        worst = eta if worst is None else min(worst, eta)
    d["weak_normal_min_eta"] = worst
    d["closed_intersection"] = True


def _segment(x) -> VPolyhedron:
    n = len(x)
    return VPolyhedron.from_generators(n, [la.zeros(n), la.vec(x)])


def _dual_functional_inclusion(c: Collection, xstar, eta_t) -> bool:
    polars = [polar(h) for h in c.hforms()]
    lhs = inverse_sum(_segment(xstar).to_h(), convex_hull_union(polars))
    ball = _dual_ball(c).scaled(eta_t)
    rhs = convex_hull_union([inverse_sum(q, ball) for q in polars])
    return inclusion(lhs, rhs).holds


def _thm_4_1(c: Collection, p: VerifyParams, d: dict) -> None:
    _require_polyhedral(c)
    _require(c.intersection().contains(la.zeros(c.dim)), "0 must lie in the intersection")
    grid = [Fraction(2) ** k for k in range(-6, 11)]
    rows = []
    for f in _functionals(c, p):
        eta = weak_normal_eta(c, f, p.tol)
        primal = eta is not None
        dual_eta = next((t for t in grid if _dual_functional_inclusion(c, f, t)), None)
        rows.append((f, eta, dual_eta))
        _check(primal == (dual_eta is not None),
               f"weak normal verdict {primal} but dual inclusion found at {dual_eta}", f)
    d["functionals"] = len(rows)
    d["max_dual_eta"] = max((r[2] for r in rows if r[2] is not None), default=None)


def eta_grid(lo=Fraction(1, 10), hi=Fraction(10), per_decade: int = 10) -> list[Fraction]:
    """Geometric grid with ``per_decade`` points per decade, as small rationals."""
    out = []
    k = 0
    start = math.log10(float(lo))
    while True:
        v = 10 ** (start + k / per_decade)
        if v > float(hi) * (1 + 1e-12):
            break
        out.append(Fraction(v).limit_denominator(1000))
        k += 1
    return out


def primal_inclusion(c: Collection, eta) -> bool:
    return normality_inclusion_holds(c, eta).holds


@lru_cache(maxsize=64)
def _dual_side(c: Collection):
    """Polars of the sets and the left side B_* # co(∪ polars)."""
    polars = tuple(polar(h) for h in c.hforms())
    return polars, inverse_sum(_dual_ball(c), convex_hull_union(polars))


def dual_inclusion(c: Collection, eta_hat) -> bool:
    polars, lhs = _dual_side(c)
    ball = _dual_ball(c)
    small = ball.scaled(1 / la.as_fraction(eta_hat))
    rhs = convex_hull_union([inverse_sum(q, small) for q in polars])
    return inclusion(lhs, rhs).holds


def relaxed_primal_inclusion(c: Collection, eta_hat) -> bool:
    # finite polyhedral sums are closed, so the closure is the set itself
    return primal_inclusion(c, eta_hat)


def inclusion_chain_violations(c: Collection, grid: Sequence[Fraction]) -> list[tuple]:
    """(kind, eta, eta_hat) for every broken implication on the grid."""
    e8 = {eta: primal_inclusion(c, eta) for eta in grid}
    e9 = {eta: dual_inclusion(c, eta) for eta in grid}
    bad = []
    for eta in grid:
        if e8[eta]:
            for eta_hat in grid:
                if eta_hat < eta and not e9[eta_hat]:
                    bad.append(("primal=>dual", eta, eta_hat))
    for eta_hat in grid:
        # the relaxed inclusion at eta_hat is the primal inclusion already evaluated on the grid
        if e9[eta_hat] and not e8[eta_hat]:
            bad.append(("dual=>relaxed", eta_hat, eta_hat))
    return bad


def _thm_4_2(c: Collection, p: VerifyParams, d: dict) -> None:
    _require_polyhedral(c)
    _require(c.intersection().contains(la.zeros(c.dim)), "0 must lie in the intersection")
    grid = eta_grid()
    bad = inclusion_chain_violations(c, grid)
    d["grid_size"] = len(grid)
    d["violations"] = len(bad)
    _check(not bad, "implication broken", bad[0] if bad else None)


def _cone_constants(c: Collection, p: VerifyParams, d: dict, with_g: bool) -> None:
    _require(c.is_cone_collection, "needs a collection of cones")
    cones = dual_cones_of(c)
    ln = lambda_N(c, p.tol, p.samples, p.seed)
    ld = lambda_D(cones, c.norm, p.tol, p.samples, p.seed)
    d["lambda_N"], d["lambda_D"] = ln, ld
    tol = _cmp_tol(c, p)
    _check(_close(ln, ld, tol), f"lambda_N={ln} differs from lambda_D={ld}")
    if with_g:
        lg = lambda_G(cones, c.norm, p.samples, p.seed)
        d["lambda_G"] = lg
        _check(_close(ln, lg, tol), f"lambda_N={ln} differs from lambda_G={lg}")


def _thm_4_3(c: Collection, p: VerifyParams, d: dict) -> None:
    _require(c.is_cone_collection, "needs a collection of cones")
    ln = lambda_N(c, p.tol, p.samples, p.seed)
    lg = lambda_G(dual_cones_of(c), c.norm, p.samples, p.seed)
    d["lambda_N"], d["lambda_G"] = ln, lg
    d["closed_intersection"] = True
    _check(_positive(ln) == _positive(lg), "normal property and property (G) disagree")


def _thm_5_3(c: Collection, p: VerifyParams, d: dict) -> None:
    _thm_4_3(c, p, d)
    ln = d["lambda_N"]
    glb, gub = gamma_estimate(c, p.samples, p.seed, lambda_un=(ln, "cone-equal"), tol=p.tol)
    d["gamma_lb"], d["gamma_ub"] = glb, gub
    regular = math.isfinite(gub)
    _check(regular == _positive(ln), "linear regularity and normal property disagree")
    _check(glb <= gub * (1 + 1e-6), f"sampled ratio {glb} exceeds 1/lambda_N = {gub}")


# ---------------------------------------------------------------------------
# pointwise properties
# ---------------------------------------------------------------------------

def _tested_points(c: Collection, p: VerifyParams) -> list[tuple]:
    try:
        return points_of_interest(c, p.points)
    except UnsupportedError:
        return [la.vec(x) for x in p.points]


def _local_cones(c: Collection, x):
    tangents = [tangent_cone(s, x) for s in c.sets]
    normals = [normal_cone(s, x) for s in c.sets]
    tcol = Collection(c.dim, c.norm, tuple(tangents), name=f"{c.name}_tangent")
    return tcol, normals


def _local_constants(c: Collection, x, p: VerifyParams) -> dict:
    tcol, normals = _local_cones(c, x)
    ln = lambda_N(tcol, p.tol, p.samples, p.seed)
    try:
        lg = lambda_G(normals, c.norm, p.samples, p.seed)
    except UnsupportedError:
        lg = None
    glb, gub = gamma_estimate(tcol, p.samples, p.seed, lambda_un=(ln, "cone-equal"), tol=p.tol)
    return {"lambda_N_T": ln, "lambda_G_N": lg, "gamma_lb_T": glb, "gamma_ub_T": gub}


def _thm_5_1(c: Collection, p: VerifyParams, d: dict, with_gamma: bool) -> None:
    pts = _tested_points(c, p)
    _require(bool(pts), "no points to test")
    reports = [chip_report_at(c, x, seed=p.seed, samples=p.samples) for x in pts]
    for r in reports:
        _require(r.chip, f"CHIP fails at {r.point}")
    tol = _cmp_tol(c, p)
    for r in reports:
        k = _local_constants(c, r.point, p)
        d[f"point {_fmt_point(r.point)}"] = k
        statuses = [r.normal_chip, _positive(k["lambda_N_T"]), _positive(k["lambda_G_N"])]
        if with_gamma:
            statuses.append(math.isfinite(k["gamma_ub_T"]))
            _check(k["gamma_lb_T"] <= k["gamma_ub_T"] * (1 + 1e-6),
                   "sampled ratio exceeds 1/lambda_N of the tangent cones", r.point)
        _check(len(set(statuses)) == 1, f"statuses disagree at {r.point}: {statuses}", r.point)
        if k["lambda_G_N"] is not None:
            _check(_close(k["lambda_N_T"], k["lambda_G_N"], tol),
                   "tangent-cone and normal-cone constants differ", r.point)


def _prop_5_1(c: Collection, p: VerifyParams, d: dict) -> None:
    pts = _tested_points(c, p)
    _require(bool(pts), "no points to test")
    for x in pts:
        r = chip_report_at(c, x, seed=p.seed, samples=p.samples)
        d[f"point {_fmt_point(x)}"] = {"strong_chip": r.strong_chip,
                                        "weak_normal_chip": r.weak_normal_chip}
        _check(not r.strong_chip or r.weak_normal_chip, "strong CHIP without weak normal CHIP",
               r.witnesses.get("weak_normal_chip", x))


def _thm_5_2(c: Collection, p: VerifyParams, d: dict) -> None:
    if not c.is_cone_collection and not c.norm.polyhedral:
        raise UnsupportedError("uniform normality of non-cone sets needs a polyhedral norm")
    lun, kind = lambda_UN(c, p.delta_grid, p.tol, p.samples, p.seed)
    glb, _ = gamma_estimate(c, p.samples, p.seed, lambda_un=(lun, kind), tol=p.tol)
    d["lambda_UN"], d["lambda_UN_kind"], d["gamma_lb"] = lun, kind, glb
    bound = INF if lun == 0 else (0.0 if lun == INF else 1 / float(lun))
    d["reciprocal"] = bound
    _check(_positive(lun) == math.isfinite(glb), "uniform normality and regularity disagree")
    if kind != "grid":
        _check(glb <= bound * (1 + 1e-6) + 1e-12, f"sampled ratio {glb} exceeds 1/lambda_UN")


def _lemma_5_1_5_2(c: Collection, p: VerifyParams, d: dict) -> None:
    _require_polyhedral(c)
    lun, kind = lambda_UN(c, p.delta_grid, p.tol, p.samples, p.seed)
    d["lambda_UN"], d["lambda_UN_kind"] = lun, kind
    _require(lun != 0, "no uniform normality constant")
    if lun == INF:
        gammas = [Fraction(1, 2), Fraction(1), Fraction(2)]
    else:
        gammas = [k / lun for k in (Fraction(1, 2), Fraction(1), Fraction(2))]
    base = gammas[1]
    glb, _ = gamma_estimate(c, p.samples, p.seed, lambda_un=(lun, kind), tol=p.tol)
    d["gamma"], d["gamma_lb"] = base, glb
    ball = _dual_ball(c)
    inter = c.intersection()
    for x in _tested_points(c, p):
        n_inter = GeneratedCone.of(c.dim, [r.a for r in tangent_cone(inter, x).rows] +
                                   [la.neg(r.a) for r in tangent_cone(inter, x).rows if r.eq])
        _, normals = _local_cones(c, x)
        chip = chip_report_at(c, x, seed=p.seed, samples=p.samples).chip
        lg = lambda_G(normals, c.norm)
        lhs = n_inter.to_hpoly().intersect(ball)
        for g in gammas:
            parts = [k.to_hpoly().intersect(ball.scaled(g)) for k in normals]
            ii = inclusion(lhs, convex_hull_union(parts)).holds
            rhs = chip and (lg == INF or lg >= 1 / g)
            _check(ii == rhs, f"dual inclusion {ii} but CHIP and (G) give {rhs} at gamma={g}", x)
            if g == base and kind == "cone-equal":
                _check(ii, f"dual inclusion fails at the regularity constant, point {x}", x)
    if kind == "cone-equal":
        _check(glb <= float(base) * (1 + 1e-6) + 1e-12, "sampled ratio exceeds gamma")


def _thm_5_5(c: Collection, p: VerifyParams, d: dict) -> None:
    _require(not c.is_infinite, "the index set is not compact")
    _require_polyhedral(c)
    lun, kind = lambda_UN(c, p.delta_grid, p.tol, p.samples, p.seed)
    d["lambda_UN"], d["lambda_UN_kind"] = lun, kind
    s1 = _positive(lun)
    pts = _tested_points(c, p)
    chips, lns, lgs, gubs = [], [], [], []
    for x in pts:
        chips.append(chip_report_at(c, x, seed=p.seed, samples=p.samples).chip)
        k = _local_constants(c, x, p)
        lns.append(k["lambda_N_T"])
        lgs.append(k["lambda_G_N"])
        gubs.append(k["gamma_ub_T"])
    chip = all(chips)
    s2 = chip and min(lns, default=INF) > 0
    s3 = chip and min(lgs, default=INF) > 0
    s4 = chip and max(gubs, default=0.0) < INF
    d["statements"] = {"i": s1, "ii": s2, "iii": s3, "iv": s4}
    _check(s1 == s2 == s3 == s4, "statements disagree", d["statements"])


def _fmt_point(x) -> str:
    return ",".join(str(v) for v in x)


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

THEOREMS: dict[str, Callable] = {
    "prop_3_1": _prop_3_1,
    "thm_4_1": _thm_4_1,
    "thm_4_2": _thm_4_2,
    "cor_4_1": lambda c, p, d: _cone_constants(c, p, d, with_g=False),
    "cor_4_2": lambda c, p, d: _cone_constants(c, p, d, with_g=True),
    "thm_4_3": _thm_4_3,
    "thm_5_1": lambda c, p, d: _thm_5_1(c, p, d, with_gamma=False),
    "prop_5_1": _prop_5_1,
    "thm_5_2": _thm_5_2,
    "thm_5_3": _thm_5_3,
    "thm_5_4": lambda c, p, d: _thm_5_1(c, p, d, with_gamma=True),
    "lemma_5_1_5_2": _lemma_5_1_5_2,
    "thm_5_5": _thm_5_5,
}

DESCRIPTIONS = {
    "prop_3_1": "cones: normal <=> uniformly normal; normal => weak normal",
    "thm_4_1": "weak normal <=> dual inclusion with inverse sums, per functional",
    "thm_4_2": "primal inclusion => dual inclusion for smaller eta => relaxed primal inclusion",
    "cor_4_1": "cones: lambda_N = lambda_D",
    "cor_4_2": "cones: lambda_D = lambda_N = lambda_G",
    "thm_4_3": "cones: normal <=> closed intersection and property (G)",
    "thm_5_1": "under CHIP: normal CHIP <=> property (G) of normal cones <=> normal tangent cones",
    "prop_5_1": "strong CHIP => weak normal CHIP",
    "thm_5_2": "linear regularity <=> uniform normal property",
    "thm_5_3": "cones: linear regularity <=> normal <=> property (G)",
    "thm_5_4": "under CHIP: normal CHIP <=> tangent cones normal <=> (G) <=> tangent cones regular",
    "lemma_5_1_5_2": "dual inclusion at gamma <=> CHIP and property (G) with eta = 1/gamma",
    "thm_5_5": "compact index set: linear regularity <=> CHIP with uniform local constants",
}


def verify(theorem_id: str, c: Collection, params: VerifyParams | None = None) -> TheoremReport:
    if theorem_id not in THEOREMS:
        raise KeyError(f"unknown theorem id {theorem_id!r}; known: {', '.join(THEOREMS)}")
    p = params or VerifyParams()
    details: dict = {}
    try:
        THEOREMS[theorem_id](c, p, details)
    except _NotMet as exc:
        details["reason"] = str(exc)
        return TheoremReport(theorem_id, NOT_MET, details)
    except _Fail as exc:
        details["reason"] = str(exc)
        return TheoremReport(theorem_id, FAIL, details, exc.witness)
    except UnsupportedError as exc:
        details["reason"] = str(exc)
        return TheoremReport(theorem_id, UNSUPPORTED, details)
    return TheoremReport(theorem_id, PASS, details)


# ---------------------------------------------------------------------------
# cyclic projections
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Trajectory:
    iterates: tuple  # x_0 and the point after each full cycle
    errors: tuple  # d(x_k, ∩A_i) per cycle, starting with x_0
    ratios: tuple  # errors[k] / errors[k-1], None when undefined
    rate: float | None
    fejer: bool


def _distance_to(target, x, c: Collection):
    res = project(target, x, c.norm)
    if res.sq_distance is not None:
        return res.sq_distance, math.sqrt(res.sq_distance)
    return None, float(res.distance)


def cyclic_projection(c: Collection, x0, cycles: int) -> Trajectory:
    if cycles < 1:
        raise ValueError("cycles must be at least 1")
    if c.is_infinite:
        raise UnsupportedError("cyclic projection needs finitely many sets")
    target = c.intersection()
    x = la.vec(x0) if c.norm.mode == "exact" else tuple(float(v) for v in x0)
    if len(x) != c.dim:
        raise ValueError(f"start point of length {len(x)} for dimension {c.dim}")
    iterates, errors, keys = [x], [], []
    sq, e = _distance_to(target, x, c)
    errors.append(e)
    keys.append(sq if sq is not None else e)
    for _ in range(cycles):
        for s in c.sets:
            x = project(s, x, c.norm).point
        sq, e = _distance_to(target, x, c)
        iterates.append(x)
        errors.append(e)
        keys.append(sq if sq is not None else e)
    exact = all(isinstance(k, Fraction) for k in keys)
    slack = 0 if exact else 1e-12
    fejer = all(keys[k] <= keys[k - 1] + slack for k in range(1, len(keys)))
    ratios = tuple(errors[k] / errors[k - 1] if errors[k - 1] > 0 else None
                   for k in range(1, len(errors)))
    return Trajectory(tuple(iterates), tuple(errors), ratios, fit_rate(errors), fejer)


def fit_rate(errors: Sequence[float]) -> float | None:
    """exp of the least-squares slope of log(error) over the second half."""
    half = len(errors) // 2
    pts = [(k, math.log(e)) for k, e in enumerate(errors) if k >= half and e > 0]
    if len(pts) < 2:
        # converged exactly: report 0 when the error vanished, None otherwise
        return 0.0 if errors and errors[-1] == 0 else None
    n = len(pts)
    mk = sum(k for k, _ in pts) / n
    ml = sum(v for _, v in pts) / n
    den = sum((k - mk) ** 2 for k, _ in pts)
    slope = sum((k - mk) * (v - ml) for k, v in pts) / den
    return math.exp(slope)
