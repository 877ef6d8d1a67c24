"""Projections and distance evaluation.

Exact Euclidean projection onto an H-polyhedron enumerates candidate
active sets and solves each KKT system in rationals.  Polyhedral-norm
distances use the dual description

    d(x, P) = max(0, max_{l in V(L)} l . (A x - b)),
    L = {l : l_ineq >= 0, ||A^T l||_* <= 1},

whose vertices are computed once per set.  The same vertices give an
exact H-form of the inflation P + eta*B.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import kernels
from . import linalg as la
from .errors import DimensionError, EmptySetError, UnsupportedError
from .lp import linprog
from .polyhedra import HPolyhedron, Row
from .sets import Ball, NormContext, ShrinkingIntervalFamily, is_polyhedral, to_h


@dataclass(frozen=True)
class ProjectionResult:
    point: tuple
    distance: object  # Fraction when rational, float otherwise
    sq_distance: Fraction | None = None
    active_rows: tuple = ()


def _check_dim(s, x) -> None:
    if len(x) != s.dim:
        raise DimensionError(f"point of length {len(x)} for a set of dimension {s.dim}")


def project(s, x, norm: NormContext, index: int | None = None) -> ProjectionResult:
    """Nearest point of ``s`` to ``x`` in ``norm``.

    For :class:`ShrinkingIntervalFamily` pass ``index`` to project onto one
    member; without it the result describes the intersection {0}, whose
    distance is the analytic supremum |x| of the member distances.
    """
    _check_dim(s, x)
    if isinstance(s, ShrinkingIntervalFamily):
        target = s.member(index) if index is not None else s.intersection()
        return project(target, x, norm)
    if isinstance(s, Ball):
        return _project_ball(s, x, norm)
    if not is_polyhedral(s):
        raise TypeError(f"unknown set type {type(s).__name__}")
    h = to_h(s)
    if norm.mode == "float" and norm.kind == "l2":
        a, b = float_rows(h)
        point, dist = kernels.project_polyhedron(a, b, np.array([float(v) for v in x]))
        if not np.isfinite(dist):
            raise EmptySetError("projection onto an empty set")
        return ProjectionResult(tuple(point.tolist()), float(dist))
    x = la.vec(x)
    if norm.kind == "l2":
        return _project_l2_exact(h, x)
    return _project_lp(h, x, norm.kind)


def _project_ball(s: Ball, x, norm: NormContext) -> ProjectionResult:
    if norm.kind != "l2":
        raise UnsupportedError("projection onto a Euclidean ball needs the l2 norm")
    if norm.mode == "exact":
        xv = la.vec(x)
        if s.contains(xv):
            return ProjectionResult(xv, Fraction(0), Fraction(0))
        raise UnsupportedError("exact projection onto a ball is irrational; use float mode")
    xf = np.array([float(v) for v in x])
    c = np.array([float(v) for v in s.center])
    r = float(s.radius)
    diff = xf - c
    nrm = float(np.sqrt(diff @ diff))
    if nrm <= r:
        return ProjectionResult(tuple(xf.tolist()), 0.0)
    return ProjectionResult(tuple((c + r * diff / nrm).tolist()), nrm - r)


def _project_l2_exact(h: HPolyhedron, x: tuple) -> ProjectionResult:
    if h.contains(x):
        return ProjectionResult(x, Fraction(0), Fraction(0))
    c = h.canonical()
    if c.is_empty:
        raise EmptySetError("projection onto an empty set")
    n = c.dim
    eqs = [r for r in c.rows if r.eq]
    ineqs = [(k, r) for k, r in enumerate(c.rows) if not r.eq]
    free = n - len(eqs)
    for size in range(0, free + 1):
        for subset in itertools.combinations(ineqs, size):
            rows = eqs + [r for _, r in subset]
            if rows and la.rank([r.a for r in rows]) < len(rows):
                continue
            y, lam = _kkt_point(rows, x, n)
            if y is None:
                continue
            if any(l < 0 for l in lam[len(eqs):]):
                continue
            if not c.contains(y):
                continue
            d = la.sub(x, y)
            sq = la.dot(d, d)
            active = tuple(k for k, r in enumerate(c.rows) if r.eq or la.dot(r.a, y) == r.b)
            return ProjectionResult(y, _sqrt_if_rational(sq), sq, active)
    raise AssertionError("active-set enumeration found no KKT point")


def _kkt_point(rows: Sequence[Row], x: tuple, n: int):
    """y = x - M^T lam with M y = b on the given rows."""
    if not rows:
        return x, ()
    m = [r.a for r in rows]
    gram = [[la.dot(a, b) for b in m] for a in m]
    rhs = [la.dot(a, x) - r.b for a, r in zip(m, rows)]
    lam = la.solve(gram, rhs)
    if lam is None:
        return None, ()
    y = x
    for l, a in zip(lam, m):
        y = la.sub(y, la.scale(l, a))
    return y, lam


def _sqrt_if_rational(q: Fraction):
    from math import isqrt

    p, d = q.numerator, q.denominator
    rp, rd = isqrt(p), isqrt(d)
    if rp * rp == p and rd * rd == d:
        return Fraction(rp, rd)
    return float(q) ** 0.5


def _project_lp(h: HPolyhedron, x: tuple, kind: str) -> ProjectionResult:
    n = h.dim
    z = la.zeros(n)
    ineq, eq = [], []
    if kind == "linf":
        # variables (y, t): minimise t with |y_j - x_j| <= t
        for r in h.rows:
            (eq if r.eq else ineq).append((r.a + (Fraction(0),), r.b))
        for j in range(n):
            e = la.unit(n, j)
            ineq.append((e + (Fraction(-1),), x[j]))
            ineq.append((la.neg(e) + (Fraction(-1),), -x[j]))
        objective = z + (Fraction(1),)
    else:
        # variables (y, u): minimise sum u with |y_j - x_j| <= u_j
        for r in h.rows:
            (eq if r.eq else ineq).append((r.a + z, r.b))
        for j in range(n):
            e = la.unit(n, j)
            ineq.append((e + la.neg(e), x[j]))
            ineq.append((la.neg(e) + la.neg(e), -x[j]))
        objective = z + (Fraction(1),) * n
    out = linprog(objective, ineq, eq, maximize=False)
    if out.status == "infeasible":
        raise EmptySetError("projection onto an empty set")
    y = out.point[:n]
    active = tuple(k for k, r in enumerate(h.rows) if r.eq or la.dot(r.a, y) == r.b)
    return ProjectionResult(y, out.value, None, active)


# ---------------------------------------------------------------------------
# distance oracles
# ---------------------------------------------------------------------------

def float_rows(h: HPolyhedron):
    """(A, b) float arrays with equalities split into two inequalities."""
    a, b = [], []
    for r in h.rows:
        a.append([float(v) for v in r.a])
        b.append(float(r.b))
        if r.eq:
            a.append([-float(v) for v in r.a])
            b.append(-float(r.b))
    if not a:
        return np.zeros((0, h.dim)), np.zeros(0)
    return np.array(a), np.array(b)


def dual_norm_ball_rows(kind: str, m_rows: Sequence[Sequence]) -> list[tuple]:
    """Rows c with {l : c.l <= 1} = {l : ||M^T l||_* <= 1} for a polyhedral norm."""
    if not m_rows:
        return []
    cols = la.transpose(m_rows)  # cols[j] = coefficients of (M^T l)_j
    if kind == "linf":
        # dual norm l1: every sign pattern
        out = []
        for signs in itertools.product((1, -1), repeat=len(cols)):
            out.append(tuple(sum((s * c[i] for s, c in zip(signs, cols)), Fraction(0))
                             for i in range(len(m_rows))))
        return out
    if kind == "l1":
        out = []
        for c in cols:
            out.append(tuple(c))
            out.append(la.neg(c))
        return out
    raise UnsupportedError("dual vertices need a polyhedral norm")


@lru_cache(maxsize=4096)
def distance_functionals(h: HPolyhedron, kind: str) -> tuple:
    """Pairs (g, c) with d(x, h) = max(0, max g.x - c) in the given norm."""
    c = h.canonical()
    if c.is_empty:
        raise EmptySetError("distance to an empty set")
    if not c.rows:
        return ()
    rows = list(c.rows)
    m = len(rows)
    lam_rows = [Row(r, Fraction(1)) for r in dual_norm_ball_rows(kind, [r.a for r in rows])]
    lam_rows += [Row(la.neg(la.unit(m, i)), Fraction(0)) for i, r in enumerate(rows) if not r.eq]
    lam = HPolyhedron(m, tuple(lam_rows))
    out = set()
    for v in lam.to_v().points:
        if la.is_zero(v):
            continue
        g = tuple(sum((v[i] * rows[i].a[j] for i in range(m)), Fraction(0)) for j in range(c.dim))
        const = sum((v[i] * rows[i].b for i in range(m)), Fraction(0))
        if la.is_zero(g):
            continue  # constant functional, nonpositive on a nonempty set
        out.add((g, const))
    return tuple(sorted(out))


def inflate(s, eta, kind: str) -> HPolyhedron:
    """s + eta*B as an H-polyhedron (polyhedral norm, eta >= 0)."""
    h = to_h(s)
    eta = la.as_fraction(eta)
    if eta == 0:
        return h
    rows = tuple(Row(g, c + eta) for g, c in distance_functionals(h, kind))
    return HPolyhedron(h.dim, rows)


def exact_distance(s, x, kind: str) -> Fraction:
    h = to_h(s)
    x = la.vec(x)
    best = Fraction(0)
    for g, c in distance_functionals(h, kind):
        v = la.dot(g, x) - c
        if v > best:
            best = v
    return best


class DistanceOracle:
    """Vectorised float distance to one set."""

    def __init__(self, s, kind: str):
        self.set = s
        self.kind = kind
        self._mode = None
        if isinstance(s, ShrinkingIntervalFamily):
            self._mode = "family"
        elif isinstance(s, Ball):
            if kind != "l2":
                raise UnsupportedError("distance to a Euclidean ball needs the l2 norm")
            self._mode = "ball"
            self._c = np.array([float(v) for v in s.center])
            self._r = float(s.radius)
            # |c|^2 - r^2 exactly, so points near a sphere through 0 keep precision
            self._k = float(sum((v * v for v in s.center), Fraction(0)) - s.radius ** 2)
        elif is_polyhedral(s):
            h = to_h(s)
            if kind == "l2":
                self._mode = "poly_l2"
                self._a, self._b = float_rows(h.canonical())
            else:
                self._mode = "poly_dual"
                fs = distance_functionals(h, kind)
                n = h.dim
                self._g = np.array([[float(v) for v in g] for g, _ in fs]).reshape(len(fs), n)
                self._h = np.array([float(c) for _, c in fs])
        else:
            raise TypeError(f"unknown set type {type(s).__name__}")

    def batch(self, xs) -> np.ndarray:
        xs = np.atleast_2d(np.asarray(xs, dtype=float))
        if self._mode == "family":
            return np.abs(xs[:, 0])
        if self._mode == "ball":
            excess = (xs * xs).sum(axis=1) - 2.0 * (xs @ self._c) + self._k
            nrm = np.sqrt(np.maximum(excess + self._r ** 2, 0.0))
            # (|x-c|^2 - r^2) / (|x-c| + r) avoids cancellation near the sphere
            return np.maximum(0.0, excess / (nrm + self._r))
        if self._mode == "poly_l2":
            if self._a.shape[0] == 0:
                return np.zeros(xs.shape[0])
            return kernels.batch_polyhedron_distance(self._a, self._b, xs)
        if self._g.shape[0] == 0:
            return np.zeros(xs.shape[0])
        vals = xs @ self._g.T - self._h
        return np.maximum(0.0, vals.max(axis=1))

    def exact(self, x) -> Fraction:
        if self._mode == "family":
            return abs(la.as_fraction(x[0]))
        if self._mode == "poly_dual":
            return exact_distance(self.set, x, self.kind)
        raise UnsupportedError("exact distance needs a polyhedral set and norm")


def cone_dual_generators(h: HPolyhedron) -> list[tuple]:
    """Generators of the dual cone of the cone {a.x <= 0 (ineq), a.x = 0 (eq)}."""
    gens = []
    for r in h.canonical().rows:
        if r.b != 0:
            raise ValueError("not a cone")
        gens.append(r.a)
        if r.eq:
            gens.append(la.neg(r.a))
    return gens
