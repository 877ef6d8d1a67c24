"""Convex set variants, collections, and pointwise cone constructions.

A ``ConvexSet`` is one of :class:`~convreg.polyhedra.HPolyhedron`,
:class:`~convreg.polyhedra.VPolyhedron`, :class:`GeneratedCone`,
:class:`Ball` (Euclidean) or :class:`ShrinkingIntervalFamily`.  The last
one stands for the whole countable family ``A_i = [-1/i, 1/i]`` and only
supports the analytic operations listed on the class.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence, Union

from . import linalg as la
from .errors import DimensionError, EmptySetError, NotMemberError, UnsupportedError
from .polyhedra import (
    HPolyhedron,
    Row,
    VPolyhedron,
    as_hform,
    conical_hull_polyhedral,
    minkowski_sum,
    polar,
)

NORM_KINDS = ("l1", "l2", "linf")
MODES = ("exact", "float")
_DUAL = {"l1": "linf", "linf": "l1", "l2": "l2"}


@dataclass(frozen=True)
class NormContext:
    kind: str = "l2"
    mode: str = "exact"
    tol: Fraction = Fraction(0)

    def __post_init__(self):
        if self.kind not in NORM_KINDS:
            raise ValueError(f"unknown norm kind {self.kind!r}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.tol < 0:
            raise ValueError("tolerance must be nonnegative")

    @property
    def polyhedral(self) -> bool:
        return self.kind in ("l1", "linf")

    @property
    def dual_kind(self) -> str:
        return _DUAL[self.kind]

    def dual(self) -> "NormContext":
        return NormContext(self.dual_kind, self.mode, self.tol)

    def require_polyhedral(self, what: str) -> None:
        if not self.polyhedral:
            raise UnsupportedError(f"{what} needs a polyhedral norm (l1 or linf), got {self.kind}")


def norm_value(kind: str, v: Sequence):
    if kind == "l1":
        return sum(abs(a) for a in v)
    if kind == "linf":
        return max((abs(a) for a in v), default=0)
    return sum(a * a for a in v) ** 0.5


def unit_ball(kind: str, dim: int) -> VPolyhedron:
    """V-form of the closed unit ball of a polyhedral norm."""
    if kind == "linf":
        pts = list(itertools.product((Fraction(-1), Fraction(1)), repeat=dim))
    elif kind == "l1":
        pts = [la.scale(s, la.unit(dim, i)) for i in range(dim) for s in (Fraction(-1), Fraction(1))]
    else:
        raise UnsupportedError("the Euclidean ball is not polyhedral")
    return VPolyhedron.from_generators(dim, pts)


def unit_ball_h(kind: str, dim: int) -> HPolyhedron:
    if kind == "linf":
        return HPolyhedron.box(dim, -1, 1)
    if kind == "l1":
        rows = [Row(tuple(Fraction(s) for s in signs), Fraction(1))
                for signs in itertools.product((-1, 1), repeat=dim)]
        return HPolyhedron(dim, tuple(rows))
    raise UnsupportedError("the Euclidean ball is not polyhedral")


@dataclass(frozen=True)
class GeneratedCone:
    """cone(rays); the empty generator list gives {0}."""

    dim: int
    rays: tuple = ()

    @classmethod
    def of(cls, dim: int, rays) -> "GeneratedCone":
        rs = sorted({la.primitive(la.vec(r)) for r in rays if not la.is_zero(la.vec(r))})
        for r in rs:
            if len(r) != dim:
                raise DimensionError(f"generator of length {len(r)} for dimension {dim}")
        return cls(dim, tuple(rs))

    def to_vpoly(self) -> VPolyhedron:
        return VPolyhedron.from_generators(self.dim, [la.zeros(self.dim)], self.rays)

    @cached_property
    def _h(self) -> HPolyhedron:
        return self.to_vpoly().to_h()

    def to_hpoly(self) -> HPolyhedron:
        return self._h

    def contains(self, x) -> bool:
        return self._h.contains(x)


@dataclass(frozen=True)
class Ball:
    """Closed Euclidean ball with rational center and radius."""

    center: tuple
    radius: Fraction

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("ball radius must be positive")

    @property
    def dim(self) -> int:
        return len(self.center)

    def sq_dist_center(self, x) -> Fraction:
        return sum(((a - c) ** 2 for a, c in zip(la.vec(x), self.center)), Fraction(0))

    def contains(self, x) -> bool:
        return self.sq_dist_center(x) <= self.radius ** 2

    def on_boundary(self, x) -> bool:
        return self.sq_dist_center(x) == self.radius ** 2


@dataclass(frozen=True)
class ShrinkingIntervalFamily:
    """The family A_i = [-1/i, 1/i] in R, i = 1, 2, ...; intersection {0}."""

    dim: int = 1

    def member(self, i: int) -> HPolyhedron:
        if i < 1:
            raise ValueError("members are indexed from 1")
        return HPolyhedron.box(1, Fraction(-1, i), Fraction(1, i))

    def member_distance(self, i: int, x) -> Fraction:
        return max(Fraction(0), abs(la.as_fraction(x[0])) - Fraction(1, i))

    def sup_distance(self, x) -> Fraction:
        return abs(la.as_fraction(x[0]))

    def contains(self, x) -> bool:
        """Membership in every member, i.e. in the intersection {0}."""
        return la.as_fraction(x[0]) == 0

    def intersection(self) -> HPolyhedron:
        return HPolyhedron.singleton((Fraction(0),))


ConvexSet = Union[HPolyhedron, VPolyhedron, GeneratedCone, Ball, ShrinkingIntervalFamily]
POLYHEDRAL = (HPolyhedron, VPolyhedron, GeneratedCone)


def is_polyhedral(s) -> bool:
    return isinstance(s, POLYHEDRAL)


def to_h(s) -> HPolyhedron:
    if isinstance(s, HPolyhedron):
        return s
    if isinstance(s, (VPolyhedron, GeneratedCone)):
        return as_hform(s) if isinstance(s, VPolyhedron) else s.to_hpoly()
    raise UnsupportedError(f"{type(s).__name__} has no H-representation")


def contains(s, x) -> bool:
    if len(x) != s.dim:
        raise DimensionError(f"point of length {len(x)} for a set of dimension {s.dim}")
    return s.contains(x)


def is_cone(s) -> bool:
    if isinstance(s, GeneratedCone):
        return True
    if is_polyhedral(s):
        return to_h(s).is_cone
    return False


# ---------------------------------------------------------------------------
# collections
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Collection:
    dim: int
    norm: NormContext
    sets: tuple
    intersection_override: object = None
    name: str = "instance"

    def __post_init__(self):
        if not self.sets:
            raise ValueError("a collection needs at least one set")
        for k, s in enumerate(self.sets):
            if s.dim != self.dim:
                raise DimensionError(f"set {k} has dimension {s.dim}, collection has {self.dim}")
        if self.intersection_override is not None and self.intersection_override.dim != self.dim:
            raise DimensionError("intersection override has the wrong dimension")

    @property
    def is_infinite(self) -> bool:
        return any(isinstance(s, ShrinkingIntervalFamily) for s in self.sets)

    @property
    def all_polyhedral(self) -> bool:
        return all(is_polyhedral(s) for s in self.sets)

    @cached_property
    def is_cone_collection(self) -> bool:
        return self.all_polyhedral and all(is_cone(s) for s in self.sets)

    def hforms(self) -> list[HPolyhedron]:
        return [to_h(s) for s in self.sets]

    @cached_property
    def _intersection(self):
        if self.intersection_override is not None:
            o = self.intersection_override
            return to_h(o) if is_polyhedral(o) else o
        if self.all_polyhedral:
            hs = self.hforms()
            return hs[0].intersect(*hs[1:])
        if self.is_infinite:
            rest = [s for s in self.sets if not isinstance(s, ShrinkingIntervalFamily)]
            if not rest:
                return ShrinkingIntervalFamily().intersection()
        raise UnsupportedError(
            "intersection of non-polyhedral sets needs an intersection_override"
        )

    def intersection(self):
        return self._intersection

    def contains(self, x) -> bool:
        return all(s.contains(x) for s in self.sets)

    def validate(self, samples: int = 1000, seed: int = 0) -> None:
        """Nonempty intersection and override consistency on sampled points."""
        inter = self.intersection()
        if isinstance(inter, HPolyhedron) and inter.is_empty:
            raise EmptySetError("the sets have an empty intersection")
        if self.intersection_override is None:
            return
        o = self.intersection_override
        if is_polyhedral(o):
            for p in to_h(o).to_v().points:
                if not self.contains(p):
                    raise ValueError(f"override point {p} is not in every set")
        rng = random.Random(seed)
        anchors = list(to_h(o).to_v().points) if is_polyhedral(o) else [la.zeros(self.dim)]
        for _ in range(samples):
            base = rng.choice(anchors)
            scale = Fraction(1, rng.choice((1, 2, 4, 8, 16)))
            x = tuple(c + scale * Fraction(rng.randint(-4, 4), 4) for c in base)
            if o.contains(x) != self.contains(x):
                raise ValueError(f"intersection override disagrees with the sets at {x}")


# ---------------------------------------------------------------------------
# conical hull, tangent and normal cones
# ---------------------------------------------------------------------------

def conical_hull(s) -> tuple[HPolyhedron, bool]:
    """Closure of cone(s) and whether cone(s) itself was closed."""
    if is_polyhedral(s):
        h = to_h(s)
        if h.is_empty:
            raise EmptySetError("conical hull of an empty set")
        return conical_hull_polyhedral(h)
    if isinstance(s, Ball):
        n = s.dim
        c2 = sum((c * c for c in s.center), Fraction(0))
        r2 = s.radius ** 2
        if c2 < r2:
            return HPolyhedron.whole(n), True
        if c2 == r2:
            half = HPolyhedron(n, (Row(la.neg(s.center), Fraction(0)),)).canonical()
            # in R the ball is a segment ending at 0 and its cone is a closed ray
            return half, n == 1
        if n == 1:
            sign = 1 if s.center[0] > 0 else -1
            return HPolyhedron(1, (Row((Fraction(-sign),), Fraction(0)),)), True
        raise UnsupportedError("the conical hull of a ball away from 0 is a circular cone")
    if isinstance(s, ShrinkingIntervalFamily):
        return HPolyhedron.whole(1), True
    raise TypeError(f"unknown set type {type(s).__name__}")


def _require_member(s, x) -> tuple:
    x = la.vec(x)
    if len(x) != s.dim:
        raise DimensionError(f"point of length {len(x)} for a set of dimension {s.dim}")
    if not s.contains(x):
        raise NotMemberError(f"{x} is not in the set")
    return x


def active_rows(h: HPolyhedron, x) -> list[Row]:
    return [r for r in h.rows if r.eq or la.dot(r.a, x) == r.b]


def tangent_cone(s, x) -> HPolyhedron:
    """Closed tangent cone T(s, x) as a canonical H-polyhedron."""
    x = _require_member(s, x)
    n = s.dim
    if is_polyhedral(s):
        h = to_h(s)
        rows = tuple(Row(r.a, Fraction(0), r.eq) for r in active_rows(h, x))
        return HPolyhedron(n, rows).canonical()
    if isinstance(s, Ball):
        if not s.on_boundary(x):
            return HPolyhedron.whole(n)
        normal = la.sub(x, s.center)
        return HPolyhedron(n, (Row(normal, Fraction(0)),)).canonical()
    if isinstance(s, ShrinkingIntervalFamily):
        # every member has 0 in its interior
        return HPolyhedron.whole(1)
    raise TypeError(f"unknown set type {type(s).__name__}")


def normal_cone(s, x) -> GeneratedCone:
    """N(s, x) as a generated cone."""
    x = _require_member(s, x)
    n = s.dim
    if is_polyhedral(s):
        h = to_h(s)
        gens = []
        for r in active_rows(h, x):
            gens.append(r.a)
            if r.eq:
                gens.append(la.neg(r.a))
        return GeneratedCone.of(n, gens)
    if isinstance(s, Ball):
        if not s.on_boundary(x):
            return GeneratedCone(n, ())
        return GeneratedCone.of(n, [la.sub(x, s.center)])
    if isinstance(s, ShrinkingIntervalFamily):
        return GeneratedCone(1, ())
    raise TypeError(f"unknown set type {type(s).__name__}")


def cone_of_set_minus_point(s, x) -> tuple[HPolyhedron, str]:
    """cone(s - x) described as (closure, kind).

    kind is ``"closed"`` when cone(s - x) equals its closure, or
    ``"open_halfspace"`` when it is {d : <n, d> < 0} ∪ {0} for the single
    normal row of the closure (Euclidean ball at a boundary point, dim >= 2).
    """
    x = _require_member(s, x)
    if isinstance(s, Ball) and s.on_boundary(x) and s.dim >= 2:
        return tangent_cone(s, x), "open_halfspace"
    if is_polyhedral(s) or isinstance(s, (Ball, ShrinkingIntervalFamily)):
        return tangent_cone(s, x), "closed"
    raise TypeError(f"unknown set type {type(s).__name__}")


# ---------------------------------------------------------------------------
# inverse sum
# ---------------------------------------------------------------------------

def _require_origin(*sets) -> list[HPolyhedron]:
    hs = []
    for s in sets:
        if not is_polyhedral(s):
            raise UnsupportedError(f"inverse sum needs polyhedral sets, got {type(s).__name__}")
        h = to_h(s)
        if not h.contains(la.zeros(h.dim)):
            raise NotMemberError("inverse sum requires 0 in both sets")
        hs.append(h)
    if hs[0].dim != hs[1].dim:
        raise DimensionError(f"dimension mismatch: {hs[0].dim} vs {hs[1].dim}")
    return hs


def inverse_sum(s1, s2) -> HPolyhedron:
    """s1 # s2 computed as the polar of polar(s1) + polar(s2)."""
    h1, h2 = _require_origin(s1, s2)
    return polar(minkowski_sum(polar(h1), polar(h2)))


def _t_interval(h1: HPolyhedron, h2: HPolyhedron, x: tuple):
    """Feasible t for x in t*h1 ∩ (1-t)*h2, as (lo, lo_closed, hi, hi_closed) or None."""
    lo, lo_c, hi, hi_c = Fraction(0), False, Fraction(1), False

    def lower(v, closed=True):
        nonlocal lo, lo_c
        if v > lo or (v == lo and not closed):
            lo, lo_c = v, closed

    def upper(v, closed=True):
        nonlocal hi, hi_c
        if v < hi or (v == hi and not closed):
            hi, hi_c = v, closed

    # a.x <= t b  (rows of h1)
    for r in h1.rows:
        ax = la.dot(r.a, x)
        if r.b == 0:
            if (ax != 0) if r.eq else (ax > 0):
                return None
            continue
        v = ax / r.b
        if r.eq:
            lower(v)
            upper(v)
        elif r.b > 0:
            lower(v)
        else:
            upper(v)
    # c.x <= (1 - t) d  <=>  t d <= d - c.x  (rows of h2)
    for r in h2.rows:
        cx = la.dot(r.a, x)
        if r.b == 0:
            if (cx != 0) if r.eq else (cx > 0):
                return None
            continue
        v = (r.b - cx) / r.b
        if r.eq:
            lower(v)
            upper(v)
        elif r.b > 0:
            upper(v)
        else:
            lower(v)
    if lo < hi or (lo == hi and lo_c and hi_c):
        return lo, lo_c, hi, hi_c
    return None


def _in_recession(h: HPolyhedron, x) -> bool:
    for r in h.rows:
        v = la.dot(r.a, x)
        if (v != 0) if r.eq else (v > 0):
            return False
    return True


def inverse_sum_membership(s1, s2, x) -> bool:
    """Membership in s1 # s2 straight from the three-term definition."""
    h1, h2 = _require_origin(s1, s2)
    x = la.vec(x)
    if len(x) != h1.dim:
        raise DimensionError(f"point of length {len(x)} for dimension {h1.dim}")
    if _t_interval(h1, h2, x) is not None:
        return True
    if h1.contains(x) and _in_recession(h2, x):
        return True
    return h2.contains(x) and _in_recession(h1, x)


def inverse_sum_membership_lp(s1, s2, x) -> bool:
    """Joint relaxation over t in [0, 1] of the homogenised constraints."""
    from .lp import linprog

    h1, h2 = _require_origin(s1, s2)
    x = la.vec(x)
    ineq, eq = [], []
    for r in h1.rows:
        # a.x - t b <= 0  ->  (-b) t <= -a.x
        target = eq if r.eq else ineq
        target.append(((-r.b,), -la.dot(r.a, x)))
    for r in h2.rows:
        # c.x <= (1 - t) d  ->  d t <= d - c.x
        target = eq if r.eq else ineq
        target.append(((r.b,), r.b - la.dot(r.a, x)))
    ineq += [((Fraction(-1),), Fraction(0)), ((Fraction(1),), Fraction(1))]
    return linprog((Fraction(0),), ineq, eq).status == "optimal"
