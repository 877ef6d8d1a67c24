"""H- and V-polyhedra over Q^n and the set calculus on them.

Canonical H-form: equality rows in reduced row echelon form scaled to
primitive integers; inequality rows reduced modulo the equalities (pivot
columns zeroed), scaled by a positive factor to primitive integers, with
redundant rows removed; rows sorted lexicographically, equalities first.
Two polyhedra are equal as point sets iff their canonical forms are equal.

Redundancy removal goes through the double description method (H -> V -> H)
rather than one LP per row; both produce the facet description.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import linalg as la
from .errors import DimensionError, EmptySetError, NotMemberError
from .lp import solve_lp


@dataclass(frozen=True, order=True)
class Row:
    """One constraint ``a . x <= b`` (or ``= b`` when ``eq``)."""

    a: tuple
    b: Fraction
    eq: bool = False

    def sort_key(self):
        return (0 if self.eq else 1, self.a, self.b)

    def value(self, x: Sequence) -> Fraction:
        return la.dot(self.a, x)

    def holds(self, x: Sequence) -> bool:
        v = la.dot(self.a, x)
        return v == self.b if self.eq else v <= self.b


def _row(a, b, eq=False) -> Row:
    return Row(la.vec(a), la.as_fraction(b), bool(eq))


@dataclass(frozen=True)
class HPolyhedron:
    dim: int
    rows: tuple = ()

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionError("dimension must be positive")
        for r in self.rows:
            if len(r.a) != self.dim:
                raise DimensionError(
                    f"row of length {len(r.a)} in a polyhedron of dimension {self.dim}"
                )

    # -- constructors -------------------------------------------------
    @classmethod
    def from_constraints(cls, dim: int, ineq: Iterable = (), eq: Iterable = ()) -> "HPolyhedron":
        rows = [_row(a, b) for a, b in ineq] + [_row(a, b, True) for a, b in eq]
        return cls(dim, tuple(rows))

    @classmethod
    def whole(cls, dim: int) -> "HPolyhedron":
        return cls(dim, ())

    @classmethod
    def empty(cls, dim: int) -> "HPolyhedron":
        return cls(dim, (Row(la.zeros(dim), Fraction(-1), False),))

    @classmethod
    def box(cls, dim: int, lo, hi) -> "HPolyhedron":
        rows = []
        for i in range(dim):
            rows.append(_row(la.unit(dim, i), hi))
            rows.append(_row(la.neg(la.unit(dim, i)), -la.as_fraction(lo)))
        return cls(dim, tuple(rows))

    @classmethod
    def singleton(cls, x: Sequence) -> "HPolyhedron":
        n = len(x)
        return cls(n, tuple(_row(la.unit(n, i), x[i], True) for i in range(n)))

    # -- basic queries --------------------------------------------------
    @property
    def ineqs(self) -> list[Row]:
        return [r for r in self.rows if not r.eq]

    @property
    def eqs(self) -> list[Row]:
        return [r for r in self.rows if r.eq]

    def contains(self, x: Sequence) -> bool:
        if len(x) != self.dim:
            raise DimensionError(f"point of length {len(x)} for dimension {self.dim}")
        x = la.vec(x)
        return all(r.holds(x) for r in self.rows)

    @cached_property
    def is_empty(self) -> bool:
        return solve_lp(la.zeros(self.dim), "max", self).status == "infeasible"

    @cached_property
    def is_cone(self) -> bool:
        """True when the point set is a convex cone (nonempty, 0^+P = P)."""
        if self.is_empty:
            return False
        return self.canonical() == recession_cone(self)

    def intersect(self, *others: "HPolyhedron") -> "HPolyhedron":
        rows = list(self.rows)
        for o in others:
            _same_dim(self, o)
            rows.extend(o.rows)
        return HPolyhedron(self.dim, tuple(rows))

    def scaled(self, lam) -> "HPolyhedron":
        """The set ``lam * P`` for rational ``lam > 0``."""
        lam = la.as_fraction(lam)
        if lam <= 0:
            raise ValueError("scale factor must be positive")
        return HPolyhedron(self.dim, tuple(Row(r.a, r.b * lam, r.eq) for r in self.rows))

    def translated(self, shift: Sequence) -> "HPolyhedron":
        shift = la.vec(shift)
        return HPolyhedron(
            self.dim, tuple(Row(r.a, r.b + la.dot(r.a, shift), r.eq) for r in self.rows)
        )

    # -- representations ----------------------------------------------
    @cached_property
    def _vform(self) -> "VPolyhedron":
        return _h_to_v(self)

    def to_v(self) -> "VPolyhedron":
        if self.is_empty:
            raise EmptySetError("cannot convert an empty polyhedron to V-form")
        return self._vform

    @cached_property
    def _canonical(self) -> "HPolyhedron":
        if self.is_empty:
            return HPolyhedron.empty(self.dim)
        return _v_to_h(self._vform)

    def canonical(self) -> "HPolyhedron":
        return self._canonical

    def same_set(self, other: "HPolyhedron") -> bool:
        _same_dim(self, other)
        return self.canonical() == other.canonical()

    def __str__(self) -> str:
        if not self.rows:
            return f"R^{self.dim}"
        parts = []
        for r in self.rows:
            lhs = " ".join(f"{c}" for c in r.a)
            parts.append(f"[{lhs}] {'=' if r.eq else '<='} {r.b}")
        return "{" + "; ".join(parts) + "}"


@dataclass(frozen=True)
class VPolyhedron:
    """conv(points) + cone(rays).  Lines appear as a pair of opposite rays."""

    dim: int
    points: tuple = ()
    rays: tuple = ()

    def __post_init__(self):
        for v in tuple(self.points) + tuple(self.rays):
            if len(v) != self.dim:
                raise DimensionError(f"generator of length {len(v)} for dimension {self.dim}")

    @classmethod
    def from_generators(cls, dim: int, points: Iterable = (), rays: Iterable = ()) -> "VPolyhedron":
        pts = tuple(sorted(set(la.vec(p) for p in points)))
        rs = []
        for r in rays:
            r = la.vec(r)
            if la.is_zero(r):
                continue
            rs.append(la.primitive(r))
        return cls(dim, pts, tuple(sorted(set(rs))))

    @property
    def is_empty(self) -> bool:
        return not self.points

    @cached_property
    def _hform(self) -> HPolyhedron:
        return _v_to_h(self)

    def to_h(self) -> HPolyhedron:
        return self._hform

    def contains(self, x: Sequence) -> bool:
        return self._hform.contains(x)


@dataclass(frozen=True)
class InclusionResult:
    holds: bool
    witness: tuple | None = None
    violated_row: Row | None = None

    def __bool__(self) -> bool:
        return self.holds


# ---------------------------------------------------------------------------
# double description
# ---------------------------------------------------------------------------

def _popcount(x: int) -> int:
    return bin(x).count("1")


def cone_generators(ineq: Sequence[Sequence[int]], eq: Sequence[Sequence[int]], n: int):
    """Extreme rays and lineality basis of ``{z : ineq z <= 0, eq z = 0}``.

    Integer rows in, primitive integer tuples out.  Rows are processed in the
    given order; adjacency of two rays is decided by the rank of the rows
    tight at both.
    """
    ineq = [list(r) for r in ineq]
    eq = [list(r) for r in eq]
    lines = [tuple(int(c) for c in v) for v in la.nullspace(ineq + eq, n)]
    w_basis = [tuple(int(c) for c in v) for v in la.nullspace(eq + [list(l) for l in lines], n)]
    k = len(w_basis)
    if k == 0:
        return [], lines
    # constraints in w-coordinates: h'(w) = h . (B w)
    hw = [[sum(h[i] * b[i] for i in range(n)) for b in w_basis] for h in ineq]

    chosen: list[int] = []
    for idx, row in enumerate(hw):
        if not any(row):
            continue
        if la.int_rank([hw[j] for j in chosen] + [row]) > len(chosen):
            chosen.append(idx)
            if len(chosen) == k:
                break
    if len(chosen) < k:
        raise ArithmeticError("cone is not pointed after removing its lineality space")
    base = [[Fraction(v) for v in hw[j]] for j in chosen]
    rays: list[tuple[int, ...]] = []
    masks: list[int] = []
    for i in range(k):
        rhs = [Fraction(-1) if j == i else Fraction(0) for j in range(k)]
        sol = la.solve(base, rhs)
        ray = tuple(int(c) for c in la.primitive(sol))
        rays.append(ray)
    processed = list(chosen)
    bit = {j: 1 << pos for pos, j in enumerate(processed)}
    for r in rays:
        m = 0
        for j in processed:
            if sum(a * c for a, c in zip(hw[j], r)) == 0:
                m |= bit[j]
        masks.append(m)

    for idx in range(len(hw)):
        if idx in bit:
            continue
        h = hw[idx]
        bit[idx] = 1 << len(processed)
        processed.append(idx)
        vals = [sum(a * c for a, c in zip(h, r)) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zero = [i for i, v in enumerate(vals) if v == 0]
        new_rays = [rays[i] for i in neg] + [rays[i] for i in zero]
        new_masks = [masks[i] for i in neg] + [masks[i] | bit[idx] for i in zero]
        if pos and neg:
            for p in pos:
                for q in neg:
                    common = masks[p] & masks[q]
                    if _popcount(common) < k - 2:
                        continue
                    tight_rows = [hw[j] for j in processed[:-1] if common & bit[j]]
                    if la.int_rank(tight_rows) != k - 2:
                        continue
                    vp, vq = vals[p], vals[q]
                    w = [vp * b - vq * a for a, b in zip(rays[p], rays[q])]
                    new_rays.append(la.primitive_int(w))
                    new_masks.append(common | bit[idx])
        rays, masks = new_rays, new_masks

    out = []
    for r in rays:
        z = [sum(r[j] * w_basis[j][i] for j in range(k)) for i in range(n)]
        out.append(la.primitive_int(z))
    return sorted(set(out)), lines


def _h_to_v(p: HPolyhedron) -> VPolyhedron:
    n = p.dim
    ineq = []
    for r in p.ineqs:
        ineq.append(la.integer_scale(list(r.a) + [-r.b]))
    ineq.append([0] * n + [-1])
    eq = [la.integer_scale(list(r.a) + [-r.b]) for r in p.eqs]
    rays, lines = cone_generators(ineq, eq, n + 1)
    points, dirs = [], []
    for r in rays:
        t = r[n]
        if t > 0:
            points.append(tuple(Fraction(c, t) for c in r[:n]))
        else:
            dirs.append(tuple(Fraction(c) for c in r[:n]))
    for l in lines:
        d = tuple(Fraction(c) for c in l[:n])
        dirs.append(d)
        dirs.append(la.neg(d))
    if not points:
        raise EmptySetError("polyhedron is empty")
    return VPolyhedron.from_generators(n, points, dirs)


def _canonical_rows(n: int, ineqs: Iterable, eqs: Iterable) -> tuple:
    """Normalise (a, b) pairs of a nonempty polyhedron into canonical rows."""
    eq_aug = [list(a) + [b] for a, b in eqs]
    red, pivots = la.rref(eq_aug, n + 1) if eq_aug else ([], [])
    eq_rows = []
    for row in red:
        prim = la.primitive(row)
        eq_rows.append(Row(tuple(prim[:n]), prim[n], True))
    out = set()
    for a, b in ineqs:
        aug = list(a) + [b]
        for row, pc in zip(red, pivots):
            f = aug[pc]
            if f != 0:
                aug = [x - f * y for x, y in zip(aug, row)]
        if la.is_zero(aug[:n]):
            continue
        prim = la.primitive(aug)
        out.add(Row(tuple(prim[:n]), prim[n], False))
    rows = sorted(eq_rows, key=Row.sort_key) + sorted(out, key=Row.sort_key)
    return tuple(rows)


def _v_to_h(v: VPolyhedron) -> HPolyhedron:
    n = v.dim
    if v.is_empty:
        return HPolyhedron.empty(n)
    gens = [la.integer_scale(list(p) + [1]) for p in v.points]
    gens += [la.integer_scale(list(r) + [0]) for r in v.rays]
    rays, lines = cone_generators(gens, [], n + 1)
    ineqs, eqs = [], []
    for y in rays:
        a = tuple(Fraction(c) for c in y[:n])
        if la.is_zero(a):
            continue
        ineqs.append((a, Fraction(-y[n])))
    for y in lines:
        eqs.append((tuple(Fraction(c) for c in y[:n]), Fraction(-y[n])))
    return HPolyhedron(n, _canonical_rows(n, ineqs, eqs))


# ---------------------------------------------------------------------------
# set calculus
# ---------------------------------------------------------------------------

def _same_dim(p, q) -> None:
    if p.dim != q.dim:
        raise DimensionError(f"dimension mismatch: {p.dim} vs {q.dim}")


def as_vform(s) -> VPolyhedron:
    if isinstance(s, VPolyhedron):
        return s
    if isinstance(s, HPolyhedron):
        return s.to_v()
    to_v = getattr(s, "to_vpoly", None)
    if to_v is None:
        raise TypeError(f"not a polyhedral set: {type(s).__name__}")
    return to_v()


def as_hform(s) -> HPolyhedron:
    if isinstance(s, HPolyhedron):
        return s
    if isinstance(s, VPolyhedron):
        return s.to_h()
    to_h = getattr(s, "to_hpoly", None)
    if to_h is None:
        raise TypeError(f"not a polyhedral set: {type(s).__name__}")
    return to_h()


def convert_representation(p):
    """H-form to V-form, or V-form to canonical H-form."""
    if isinstance(p, HPolyhedron):
        if p.is_empty:
            raise EmptySetError("cannot convert an empty polyhedron")
        return p.to_v()
    if isinstance(p, VPolyhedron):
        if p.is_empty:
            raise EmptySetError("cannot convert an empty polyhedron")
        return p.to_h()
    raise TypeError(f"expected HPolyhedron or VPolyhedron, got {type(p).__name__}")


def canonicalize(p: HPolyhedron) -> HPolyhedron:
    return as_hform(p).canonical()


def polar(s) -> HPolyhedron:
    """``{y : <y, x> <= 1 for all x in s}``; requires ``0 in s``."""
    v = as_vform(s)
    if not as_hform(s).contains(la.zeros(v.dim)):
        raise NotMemberError("polar requires the origin to lie in the set")
    rows = [Row(p, Fraction(1)) for p in v.points] + [Row(r, Fraction(0)) for r in v.rays]
    return HPolyhedron(v.dim, tuple(rows)).canonical()


def dual_cone(s) -> HPolyhedron:
    """``{y : <y, x> <= 0 for all x in s}``."""
    v = as_vform(s)
    rows = [Row(p, Fraction(0)) for p in v.points if not la.is_zero(p)]
    rows += [Row(r, Fraction(0)) for r in v.rays]
    return HPolyhedron(v.dim, tuple(rows)).canonical()


def recession_cone(p) -> HPolyhedron:
    h = as_hform(p)
    if h.is_empty:
        raise EmptySetError("recession cone of an empty set")
    return HPolyhedron(h.dim, tuple(Row(r.a, Fraction(0), r.eq) for r in h.rows)).canonical()


def minkowski_sum(p, q) -> HPolyhedron:
    vp, vq = as_vform(p), as_vform(q)
    _same_dim(vp, vq)
    points = [la.add(a, b) for a in vp.points for b in vq.points]
    return VPolyhedron.from_generators(vp.dim, points, vp.rays + vq.rays).to_h()


def convex_hull_union(sets: Sequence) -> HPolyhedron:
    """Closed convex hull of a finite union of nonempty polyhedra."""
    vs = [as_vform(s) for s in sets]
    n = vs[0].dim
    points = [p for v in vs for p in v.points]
    rays = [r for v in vs for r in v.rays]
    return VPolyhedron.from_generators(n, points, rays).to_h()


def conic_hull_of_generators(dim: int, generators: Iterable) -> HPolyhedron:
    return VPolyhedron.from_generators(dim, [la.zeros(dim)], generators).to_h()


def inclusion(p, q) -> InclusionResult:
    """Decide ``p ⊂ q`` by maximising each row of ``q`` over ``p``.

    On failure the witness is a point of ``p`` outside ``q``: among the rows
    with the largest violation (unbounded rows are capped at violation 1),
    the lexicographically largest LP vertex.
    """
    hp, hq = as_hform(p), as_hform(q)
    _same_dim(hp, hq)
    if hp.is_empty:
        return InclusionResult(True)
    checks = []
    for r in hq.canonical().rows:
        checks.append((r.a, r.b, r))
        if r.eq:
            checks.append((la.neg(r.a), -r.b, r))
    worst = None
    candidates: list[tuple[tuple, Row]] = []
    for a, b, row in checks:
        out = solve_lp(a, "max", hp)
        if out.status == "unbounded":
            capped = hp.intersect(HPolyhedron(hp.dim, (Row(a, b + 1),)))
            point = solve_lp(a, "max", capped).point
            viol = None  # stands for +inf
        elif out.value > b:
            point, viol = out.point, out.value - b
        else:
            continue
        key = (1, Fraction(0)) if viol is None else (0, viol)
        if worst is None or key > worst:
            worst = key
            candidates = [(point, row)]
        elif key == worst:
            candidates.append((point, row))
    if worst is None:
        return InclusionResult(True)
    point, row = max(candidates, key=lambda pr: pr[0])
    return InclusionResult(False, point, row)


def same_set(p, q) -> bool:
    return as_hform(p).same_set(as_hform(q))


def conical_hull_polyhedral(s) -> tuple[HPolyhedron, bool]:
    """Closed conical hull of a polyhedral set and whether cone(s) was closed.

    cone(s) = {sum a_j p_j + sum b_k r_k : a, b >= 0, sum a > 0} ∪ {0}; it
    misses exactly the nonzero points whose minimal face in the closure
    contains no point generator.  So it is closed iff every minimal nonzero
    face of the closure (the lineality space, or each extreme ray when the
    closure is pointed) contains a point generator.
    """
    v = as_vform(s)
    n = v.dim
    gens = list(v.points) + list(v.rays)
    closure = conic_hull_of_generators(n, gens)
    if any(la.is_zero(p) for p in v.points) or not v.rays:
        return closure, True
    cv = closure.to_v()
    normals = [r.a for r in closure.rows]
    if n - la.rank(normals) > 0:
        in_lineality = [p for p in v.points if all(la.dot(a, p) == 0 for a in normals)]
        return closure, bool(in_lineality)
    for ray in cv.rays:
        on_ray = any(_positive_multiple(p, ray) for p in v.points)
        if not on_ray:
            return closure, False
    return closure, True


def _positive_multiple(p: Sequence, r: Sequence) -> bool:
    if la.is_zero(p):
        return False
    return la.primitive(p) == la.primitive(r)
