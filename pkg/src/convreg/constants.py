"""Regularity constants of a collection of convex sets.

With a polyhedral norm (l1 / linf) every inclusion below is an exact
polyhedral inclusion and the constants are found by bisection on
rationals.  With the Euclidean norm only cone collections are handled,
through seeded direction sampling followed by local refinement; those
values are one-sided estimates and the report says which side.

Conventions: ``norm`` always describes the primal space.  Functionals
(dual cones, decompositions) are measured in the dual norm, so l1 and
linf trade places and l2 stays put.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from . import kernels
from . import linalg as la
from .errors import NonMonotoneError, NotMemberError, UnsupportedError
from .lp import linprog
from .polyhedra import HPolyhedron, InclusionResult, VPolyhedron, inclusion
from .projection import DistanceOracle, cone_dual_generators, exact_distance, inflate
from .sets import (
    Ball,
    Collection,
    GeneratedCone,
    NormContext,
    ShrinkingIntervalFamily,
    norm_value,
    unit_ball_h,
)

INF = math.inf
UNCONSTRAINED = "unconstrained"
DEFAULT_TOL = Fraction(1, 10**6)
CAP = Fraction(2**20)
DEFAULT_DELTA_GRID = (Fraction(1, 2), Fraction(1), Fraction(2))


@dataclass(frozen=True)
class Decomposition:
    terms: tuple  # ((cone index, vector), ...)
    norm_sum: object
    residual: float = 0.0
    envelope: tuple | None = None  # (lower, upper) from the l1 problem, l2 mode only


@dataclass(frozen=True)
class Bisection:
    value: object  # Fraction or INF
    lo: Fraction
    hi: object
    steps: int
    witness: tuple | None = None


@dataclass(frozen=True)
class ConstantsReport:
    lambda_N: object
    lambda_UN: object
    lambda_UN_kind: str
    lambda_D: object
    lambda_G: object
    gamma_lb: float
    gamma_ub: float
    bisect_tol: Fraction
    samples: int
    seed: int
    certified: dict = field(default_factory=dict)
    notes: tuple = ()


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def bisect(pred: Callable[[Fraction], bool], tol=DEFAULT_TOL, cap=CAP) -> Bisection:
    """Largest eta in [0, cap] (to within tol) with pred(eta) true.

    pred is assumed monotone nonincreasing; the bracket starts at 1 and
    doubles while pred holds, giving +inf once it passes ``cap``.  The
    reported value is the largest verified eta.
    """
    tol = la.as_fraction(tol)
    steps = 0
    lo, hi = Fraction(0), Fraction(1)
    steps += 1
    if pred(hi):
        lo = hi
        while True:
            hi = lo * 2
            if hi > cap:
                return Bisection(INF, lo, INF, steps)
            steps += 1
            if pred(hi):
                lo = hi
            else:
                break
    while hi - lo > tol:
        mid = (lo + hi) / 2
        steps += 1
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return Bisection(lo, lo, hi, steps)


def reciprocal(v):
    if v is None:
        return None
    if v == INF:
        return 0.0
    if v == 0:
        return INF
    return 1 / v


def _sphere(rng: np.random.Generator, n: int, count: int) -> np.ndarray:
    u = rng.standard_normal((count, n))
    nrm = np.linalg.norm(u, axis=1)
    nrm[nrm == 0] = 1.0
    return u / nrm[:, None]


def _refine(f: Callable[[np.ndarray], np.ndarray], starts: np.ndarray, rng, project=None,
            rounds: int = 40) -> tuple[float, np.ndarray]:
    """Deterministic random-perturbation hill climb of f from each start."""
    best_v, best_x = -INF, None
    for x in starts:
        x = np.array(x, dtype=float)
        v = float(f(x[None, :])[0])
        step = 0.1
        for _ in range(rounds):
            cand = x + step * rng.standard_normal((8, x.size))
            if project is not None:
                cand = project(cand)
            vals = f(cand)
            k = int(np.argmax(vals))
            if vals[k] > v:
                v, x = float(vals[k]), cand[k]
            else:
                step *= 0.5
                if step < 1e-9:
                    break
        if v > best_v:
            best_v, best_x = v, x
    return best_v, best_x


def _normalize_rows(x: np.ndarray) -> np.ndarray:
    nrm = np.linalg.norm(x, axis=1)
    nrm[nrm == 0] = 1.0
    return x / nrm[:, None]


def intersection_h(c: Collection) -> HPolyhedron:
    inter = c.intersection()
    if not isinstance(inter, HPolyhedron):
        raise UnsupportedError("the intersection has no polyhedral description")
    return inter


def _only_family(c: Collection) -> bool:
    return all(isinstance(s, ShrinkingIntervalFamily) for s in c.sets)


def dual_cones_of(c: Collection) -> list[GeneratedCone]:
    """Dual cones K_i^- of a cone collection, as generated cones."""
    if not c.is_cone_collection:
        raise UnsupportedError("dual cones need a collection of polyhedral cones")
    return [GeneratedCone.of(c.dim, cone_dual_generators(h)) for h in c.hforms()]


# ---------------------------------------------------------------------------
# normality
# ---------------------------------------------------------------------------

def normality_inclusion_holds(c: Collection, eta, delta=1, samples: int = 10_000,
                              seed: int = 0) -> InclusionResult:
    """Does  ∩(A_i + eta*delta*B) ⊂ (∩A_i) + delta*B  hold?  Witness on failure."""
    eta, delta = la.as_fraction(eta), la.as_fraction(delta)
    if eta < 0 or delta <= 0:
        raise ValueError("need eta >= 0 and delta > 0")
    if _only_family(c):
        # ∩[-1/i - t, 1/i + t] = [-t, t] with t = eta*delta
        t = eta * delta
        if t <= delta:
            return InclusionResult(True)
        return InclusionResult(False, (t,))
    if c.norm.polyhedral:
        if not c.all_polyhedral:
            raise UnsupportedError("inflation by a polyhedral ball needs polyhedral sets")
        kind = c.norm.kind
        inter = intersection_h(c)
        lhs = [inflate(h, eta * delta, kind) for h in c.hforms()]
        lhs = lhs[0].intersect(*lhs[1:])
        return inclusion(lhs, inflate(inter, delta, kind))
    if c.is_cone_collection:
        ratio, worst = l2_cone_ratio(c, samples, seed)
        if eta * Fraction(ratio) <= 1:
            return InclusionResult(True)
        d_max = max(DistanceOracle(s, "l2").batch(worst[None, :])[0] for s in c.sets)
        w = worst * float(eta * delta) / d_max
        return InclusionResult(False, tuple(float(v) for v in w))
    raise UnsupportedError("the Euclidean normality test handles cone collections only")


@lru_cache(maxsize=256)
def l2_cone_ratio(c: Collection, samples: int, seed: int) -> tuple[float, np.ndarray]:
    """Sampled sup over the unit sphere of d(x, ∩K_i) / max_i d(x, K_i)."""
    inter = DistanceOracle(intersection_h(c), "l2")
    parts = [DistanceOracle(s, "l2") for s in c.sets]

    def ratio(xs):
        den = np.max([o.batch(xs) for o in parts], axis=0)
        num = inter.batch(xs)
        out = np.zeros_like(num)
        ok = den > 1e-300
        out[ok] = num[ok] / den[ok]
        return out

    rng = np.random.default_rng(seed)
    xs = _sphere(rng, c.dim, samples)
    vals = ratio(xs)
    order = np.argsort(-vals, kind="stable")[:5]
    v, x = _refine(ratio, xs[order], rng, project=_normalize_rows)
    v0 = float(vals[order[0]]) if len(order) else 0.0
    if v0 >= v:
        v, x = v0, xs[order[0]]
    return v, x


def _lambda_N_bisection(c: Collection, delta=1, tol=DEFAULT_TOL) -> Bisection:
    res = bisect(lambda eta: normality_inclusion_holds(c, eta, delta).holds, tol)
    if not c.is_cone_collection and res.value != INF and res.lo > 0:
        for k in range(1, 8):
            eta = res.lo * k / 8
            if not normality_inclusion_holds(c, eta, delta).holds:
                raise NonMonotoneError(
                    f"inclusion fails at eta={eta} but holds at eta={res.lo}"
                )
    witness = None
    if res.hi != INF:
        witness = normality_inclusion_holds(c, res.hi, delta).witness
    return Bisection(res.value, res.lo, res.hi, res.steps, witness)


def lambda_N(c: Collection, tol=DEFAULT_TOL, samples: int = 10_000, seed: int = 0):
    """Normality constant; Fraction, INF, or a float in sampled l2 mode."""
    if _only_family(c):
        return Fraction(1)
    if not c.norm.polyhedral:
        if not c.is_cone_collection:
            raise UnsupportedError("the Euclidean normality constant needs a cone collection")
        ratio, _ = l2_cone_ratio(c, samples, seed)
        return INF if ratio == 0 else 1.0 / ratio
    return _lambda_N_bisection(c, 1, tol).value


def lambda_UN(c: Collection, delta_grid: Sequence = (), tol=DEFAULT_TOL, samples: int = 10_000,
              seed: int = 0) -> tuple[object, str]:
    """Uniform normality constant and how it was obtained.

    kinds: ``cone-equal`` (equals lambda_N for cones), ``analytic`` (demo
    family) or ``grid`` (minimum of per-delta constants over the grid; an
    upper estimate of the true infimum over all delta).
    """
    if _only_family(c):
        return Fraction(1), "analytic"
    if c.is_cone_collection:
        return lambda_N(c, tol, samples, seed), "cone-equal"
    if not delta_grid:
        raise ValueError("a non-cone collection needs a nonempty delta grid")
    if not c.norm.polyhedral:
        raise UnsupportedError("the Euclidean uniform normality constant needs a cone collection")
    best = INF
    for delta in delta_grid:
        v = _lambda_N_bisection(c, la.as_fraction(delta), tol).value
        if v < best:
            best = v
    return best, "grid"


# ---------------------------------------------------------------------------
# dual side
# ---------------------------------------------------------------------------

def _all_generators(cones: Sequence[GeneratedCone]) -> list[tuple]:
    return [g for k in cones for g in k.rays]


def _check_cones(cones: Sequence[GeneratedCone]) -> int:
    if not cones:
        raise ValueError("need at least one cone")
    n = cones[0].dim
    for k in cones:
        if not isinstance(k, GeneratedCone):
            raise UnsupportedError("dual constants are defined for generated cones only")
        if k.dim != n:
            raise ValueError("cones of different dimensions")
    return n


def _ball_cap_vertices(cone: GeneratedCone, kind: str) -> list[tuple]:
    """Vertices of cone ∩ B in the polyhedral norm ``kind``."""
    n = cone.dim
    if not cone.rays:
        return [la.zeros(n)]
    h = cone.to_hpoly().intersect(unit_ball_h(kind, n))
    return list(h.to_v().points)


def lambda_D(dual_cones: Sequence[GeneratedCone], norm: NormContext, tol=DEFAULT_TOL,
             samples: int = 10_000, seed: int = 0):
    """Dual normality constant of a finite family of generated cones."""
    n = _check_cones(dual_cones)
    gens = _all_generators(dual_cones)
    if not gens:
        return INF
    if norm.polyhedral:
        kind = norm.dual_kind
        lhs = [v for v in _ball_cap_vertices(GeneratedCone.of(n, gens), kind) if not la.is_zero(v)]
        if not lhs:
            return INF
        pts = [p for k in dual_cones for p in _ball_cap_vertices(k, kind)]
        q = VPolyhedron.from_generators(n, pts).to_h()
        return bisect(lambda eta: all(q.contains(la.scale(eta, u)) for u in lhs), tol).value
    ratio = _dual_ratio(tuple(dual_cones), samples, seed)
    return INF if ratio == 0 else 1.0 / ratio


def _stack(cones: Sequence[GeneratedCone]):
    rows, offsets = [], [0]
    for k in cones:
        rows.extend([[float(v) for v in g] for g in k.rays])
        offsets.append(len(rows))
    n = cones[0].dim
    arr = np.array(rows, dtype=float).reshape(len(rows), n)
    return arr, offsets


@lru_cache(maxsize=256)
def _dual_ratio(cones: tuple, samples: int, seed: int) -> float:
    """Sampled sup of |P_{sum}(u)| / max_i |P_i(u)| over unit u."""
    gens, offsets = _stack(cones)

    def f(xs):
        return kernels.batch_cone_distance_ratio(gens, offsets, gens, xs)

    rng = np.random.default_rng(seed)
    xs = _sphere(rng, cones[0].dim, samples)
    vals = f(xs)
    vals[~np.isfinite(vals)] = 0.0
    order = np.argsort(-vals, kind="stable")[:5]
    v, _ = _refine(f, xs[order], rng, project=_normalize_rows)
    return max(v, float(vals[order[0]]))


def min_decomposition(dual_cones: Sequence[GeneratedCone], xstar, norm: NormContext,
                      iters: int = 3000) -> Decomposition:
    """Cheapest split of xstar into pieces from the cones, in the dual norm."""
    n = _check_cones(dual_cones)
    if len(xstar) != n:
        raise ValueError(f"functional of length {len(xstar)} for dimension {n}")
    if norm.polyhedral or norm.mode == "exact":
        xs = la.vec(xstar)
        if la.is_zero(xs):
            raise ValueError("xstar must be nonzero")
        if not GeneratedCone.of(n, _all_generators(dual_cones)).contains(xs):
            raise NotMemberError("xstar is outside the cone generated by the union")
    if norm.polyhedral:
        return _min_decomposition_lp(dual_cones, xs, norm.dual_kind)
    x = np.array([float(v) for v in xstar])
    if not np.any(x):
        raise ValueError("xstar must be nonzero")
    gens, offsets = _stack(dual_cones)
    scale = float(np.linalg.norm(x))
    w, value, res = kernels.min_decomposition(gens, offsets, x / scale, iters, 0.1)
    terms = tuple((i, tuple(float(v) * scale for v in w[i])) for i in range(len(dual_cones))
                  if np.any(w[i]))
    envelope = None
    if norm.mode == "exact":
        l1 = _min_decomposition_lp(dual_cones, la.vec(xstar), "l1").norm_sum
        envelope = (float(l1) / math.sqrt(n), float(l1))
    return Decomposition(terms, value * scale, res * scale, envelope)


def _min_decomposition_lp(cones: Sequence[GeneratedCone], xs: tuple, kind: str) -> Decomposition:
    n = len(xs)
    owners = [(i, g) for i, k in enumerate(cones) for g in k.rays]
    nt = len(owners)
    m = len(cones)
    naux = m * n if kind == "l1" else m
    nv = nt + naux
    ineq, eq = [], []

    def var(j):
        return tuple(Fraction(1) if t == j else Fraction(0) for t in range(nv))

    for j in range(nt):
        ineq.append((la.neg(var(j)), Fraction(0)))
    for k in range(n):
        row = [Fraction(0)] * nv
        for j, (_, g) in enumerate(owners):
            row[j] = g[k]
        eq.append((tuple(row), xs[k]))
    for i in range(m):
        for k in range(n):
            aux = nt + (i * n + k if kind == "l1" else i)
            for sign in (1, -1):
                row = [Fraction(0)] * nv
                for j, (owner, g) in enumerate(owners):
                    if owner == i:
                        row[j] = sign * g[k]
                row[aux] = Fraction(-1)
                ineq.append((tuple(row), Fraction(0)))
    objective = tuple(Fraction(0) if j < nt else Fraction(1) for j in range(nv))
    out = linprog(objective, ineq, eq, maximize=False)
    if out.status != "optimal":
        raise NotMemberError("xstar is outside the cone generated by the union")
    t = out.point
    terms = []
    total = Fraction(0)
    for i in range(m):
        w = la.zeros(n)
        for j, (owner, g) in enumerate(owners):
            if owner == i and t[j] != 0:
                w = la.add(w, la.scale(t[j], g))
        if not la.is_zero(w):
            terms.append((i, w))
            total += norm_value(kind, w)
    return Decomposition(tuple(terms), total)


def lambda_G(dual_cones: Sequence[GeneratedCone], norm: NormContext, samples: int = 10_000,
             seed: int = 0):
    """Largest eta with property (G_eta) for the cones."""
    n = _check_cones(dual_cones)
    gens = _all_generators(dual_cones)
    if not gens:
        return INF
    if norm.polyhedral:
        kind = norm.dual_kind
        verts = [v for v in _ball_cap_vertices(GeneratedCone.of(n, gens), kind) if not la.is_zero(v)]
        if not verts:
            return INF
        worst = Fraction(0)
        for v in verts:
            r = min_decomposition(dual_cones, v, norm).norm_sum / norm_value(kind, v)
            if r > worst:
                worst = r
        return 1 / worst
    worst = _jamenson_ratio(tuple(dual_cones), samples, seed)
    return 1.0 / worst


@lru_cache(maxsize=256)
def _jamenson_ratio(cones: tuple, samples: int, seed: int) -> float:
    """Sampled sup of min_decomposition(x*) over unit x* in the sum cone (l2)."""
    gens, offsets = _stack(cones)
    n = cones[0].dim

    def to_cone(xs):
        out = np.array([kernels.project_cone(gens, x) for x in xs])
        return _normalize_rows(out)

    def f(xs, iters=300):
        xs = to_cone(xs)
        ok = np.linalg.norm(xs, axis=1) > 0.5
        vals = np.zeros(xs.shape[0])
        if ok.any():
            vals[ok] = kernels.batch_min_decomposition(gens, offsets, xs[ok], iters, 0.1)
        return vals

    rng = np.random.default_rng(seed)
    xs = _sphere(rng, n, samples)
    vals = f(xs)
    order = np.argsort(-vals, kind="stable")[:5]
    v, _ = _refine(lambda z: f(z, 3000), xs[order], rng, rounds=25)
    return max(v, float(vals[order[0]]))


# ---------------------------------------------------------------------------
# weak normality
# ---------------------------------------------------------------------------

def weak_normal_eta(c: Collection, xstar, tol=DEFAULT_TOL, samples: int = 10_000, seed: int = 0):
    """Largest verified eta with ∩(A_i + eta*B) ⊂ (∩A_i) + {x*}°.

    Returns UNCONSTRAINED for x* = 0, INF when the inclusion holds for every
    eta, and None when it fails even for the smallest tested eta.
    """
    if len(xstar) != c.dim:
        raise ValueError(f"functional of length {len(xstar)} for dimension {c.dim}")
    if all(v == 0 for v in xstar):
        return UNCONSTRAINED
    if c.norm.polyhedral:
        if not c.all_polyhedral:
            raise UnsupportedError("weak normality needs polyhedral sets")
        xs = la.vec(xstar)
        kind = c.norm.kind
        inter = intersection_h(c)
        sigma = linprog(xs, [(r.a, r.b) for r in inter.ineqs], [(r.a, r.b) for r in inter.eqs])
        if sigma.status == "unbounded":
            return INF
        bound = 1 + sigma.value
        hs = c.hforms()

        def holds(eta):
            lhs = [inflate(h, eta, kind) for h in hs]
            lhs = lhs[0].intersect(*lhs[1:])
            out = linprog(xs, [(r.a, r.b) for r in lhs.ineqs], [(r.a, r.b) for r in lhs.eqs])
            return out.status == "optimal" and out.value <= bound

        res = bisect(holds, tol)
        return None if res.value == 0 else res.value
    if c.is_cone_collection:
        cones = dual_cones_of(c)
        gens = _all_generators(cones)
        if not GeneratedCone.of(c.dim, gens).contains(la.vec(xstar)):
            return INF
        d = min_decomposition(cones, xstar, c.norm)
        return INF if d.norm_sum == 0 else 1.0 / d.norm_sum
    raise UnsupportedError("the Euclidean weak normality test handles cone collections only")


# ---------------------------------------------------------------------------
# linear regularity
# ---------------------------------------------------------------------------

def _anchor_points(c: Collection, extra: Sequence = ()) -> list[tuple]:
    pts = [tuple(float(v) for v in p) for p in extra]
    inter = c.intersection()
    if isinstance(inter, HPolyhedron):
        pts += [tuple(float(v) for v in p) for p in inter.to_v().points]
    elif isinstance(inter, Ball):
        pts.append(tuple(float(v) for v in inter.center))
    if not pts:
        pts.append((0.0,) * c.dim)
    seen, out = set(), []
    for p in pts:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def _sample_points(c: Collection, samples: int, rng, anchors, rho) -> np.ndarray:
    n = c.dim
    anchors = np.array(anchors, dtype=float)
    blocks = []
    u = _sphere(rng, n, samples)
    which = rng.integers(0, len(anchors), samples)
    radii = 10.0 ** rng.uniform(-3.0, 1.0, samples)
    blocks.append(anchors[which] + radii[:, None] * u)
    # targeted probes: axis and random directions at shrinking radii
    dirs = np.vstack([np.eye(n), -np.eye(n), _sphere(rng, n, 16)])
    radii = 10.0 ** -np.arange(0, 7)
    for a in anchors:
        for r in radii:
            blocks.append(a + r * dirs)
    xs = np.vstack(blocks)
    if rho is not None:
        rho = float(rho)
        nrm = np.array([norm_value(c.norm.kind, x) for x in xs])
        big = nrm > rho
        xs[big] = xs[big] * (rho / nrm[big])[:, None]
    return xs


def gamma_estimate(c: Collection, samples: int = 10_000, seed: int = 0, rho=None,
                   anchors: Sequence = (), lambda_un=None, parallel: bool = False,
                   tol=DEFAULT_TOL) -> tuple[float, float]:
    """(gamma_lb, gamma_ub) for d(x, ∩A_i) <= gamma * sup_i d(x, A_i).

    gamma_lb is the largest sampled ratio.  Besides uniform samples around
    the anchors it probes shrinking radii along axes, and in polyhedral-norm
    mode evaluates exactly at the vertices of ∩(A_i + B), where the ratio
    of a cone collection attains its supremum.  gamma_ub is 1/lambda_UN
    when that constant is exact (cones or the analytic family), else +inf.
    """
    kind = c.norm.kind
    if _only_family(c):
        return 1.0, 1.0
    inter = c.intersection()
    target = DistanceOracle(inter, kind)
    parts = [DistanceOracle(s, kind) for s in c.sets]
    rng = np.random.default_rng(seed)
    xs = _sample_points(c, samples, rng, _anchor_points(c, anchors), rho)

    def ratio(block):
        den = np.max([o.batch(block) for o in parts], axis=0)
        num = target.batch(block)
        out = np.zeros(block.shape[0])
        ok = den > 1e-300
        out[ok] = num[ok] / den[ok]
        return out

    if parallel and xs.shape[0] > 2048:
        chunks = np.array_split(xs, 8)
        with ThreadPoolExecutor() as pool:
            best = max(float(v.max(initial=0.0)) for v in pool.map(ratio, chunks))
    else:
        vals = ratio(xs)
        best = float(vals.max(initial=0.0))
        if c.is_cone_collection and rho is None:
            order = np.argsort(-vals, kind="stable")[:3]
            v, _ = _refine(ratio, xs[order], rng, project=_normalize_rows, rounds=20)
            best = max(best, v)
    if c.norm.polyhedral and c.all_polyhedral and isinstance(inter, HPolyhedron):
        best = max(best, _exact_vertex_ratio(c, inter, rho))
    if lambda_un is None:
        try:
            value, how = lambda_UN(c, DEFAULT_DELTA_GRID, tol, samples, seed)
        except UnsupportedError:
            value, how = None, "grid"
    else:
        value, how = lambda_un
    gamma_ub = INF
    if value is not None and how in ("cone-equal", "analytic"):
        gamma_ub = float(reciprocal(value))
    return best, gamma_ub


def _exact_vertex_ratio(c: Collection, inter: HPolyhedron, rho) -> float:
    kind = c.norm.kind
    hs = c.hforms()
    blown = [inflate(h, 1, kind) for h in hs]
    region = blown[0].intersect(*blown[1:])
    best = Fraction(0)
    for p in region.to_v().points:
        if rho is not None and norm_value(kind, p) > la.as_fraction(rho):
            continue
        den = max(exact_distance(h, p, kind) for h in hs)
        if den == 0:
            continue
        r = exact_distance(inter, p, kind) / den
        if r > best:
            best = r
    return float(best)


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

def compute_constants(c: Collection, tol=DEFAULT_TOL, samples: int = 10_000, seed: int = 0,
                      delta_grid: Sequence = DEFAULT_DELTA_GRID, rho=None,
                      parallel: bool = False, anchors: Sequence = ()) -> ConstantsReport:
    tol = la.as_fraction(tol)
    notes = []
    certified = {}
    sampled = not c.norm.polyhedral

    def attempt(name, fn):
        try:
            return fn()
        except UnsupportedError as exc:
            notes.append(f"{name}: {exc}")
            return None

    ln = attempt("lambda_N", lambda: lambda_N(c, tol, samples, seed))
    lun = attempt("lambda_UN", lambda: lambda_UN(c, delta_grid, tol, samples, seed))
    lun_value, lun_kind = lun if lun is not None else (None, "")
    ld = lg = None
    if c.is_cone_collection:
        cones = dual_cones_of(c)
        ld = attempt("lambda_D", lambda: lambda_D(cones, c.norm, tol, samples, seed))
        lg = attempt("lambda_G", lambda: lambda_G(cones, c.norm, samples, seed))
    else:
        notes.append("lambda_D, lambda_G: defined here for cone collections only")
    gl, gu = gamma_estimate(c, samples, seed, rho, anchors, lun if lun else (None, ""), parallel, tol)
    if sampled:
        certified = {"lambda_N": "upper", "lambda_D": "upper", "lambda_G": "upper",
                     "gamma_lb": "lower"}
    else:
        certified = {"lambda_N": "exact", "lambda_D": "exact", "lambda_G": "exact",
                     "gamma_lb": "lower"}
    return ConstantsReport(ln, lun_value, lun_kind, ld, lg, gl, gu, tol, samples, seed,
                           certified, tuple(notes))
