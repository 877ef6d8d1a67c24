"""Conical hull intersection properties at a point."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .constants import INF, UNCONSTRAINED, lambda_N, normality_inclusion_holds, weak_normal_eta
from .errors import NotMemberError, UnsupportedError
from .lp import linprog
from .polyhedra import HPolyhedron, dual_cone, inclusion
from .sets import (
    Ball,
    Collection,
    GeneratedCone,
    cone_of_set_minus_point,
    normal_cone,
    tangent_cone,
)


@dataclass(frozen=True)
class ChipReport:
    point: tuple
    chip: bool
    chip_closure_variant: bool
    strong_chip: bool
    normal_chip: bool
    normal_chip_constant: object
    weak_normal_chip: bool
    witnesses: dict = field(default_factory=dict)
    notes: tuple = ()

    @property
    def witness(self):
        """Witness of the first failing property, in report column order."""
        for key in ("chip", "chip_closure_variant", "strong_chip", "normal_chip", "weak_normal_chip"):
            if key in self.witnesses:
                return self.witnesses[key]
        return None


def tangent_of_intersection(c: Collection, x) -> HPolyhedron:
    """T(∩A_i, x), using the intersection H-form, the override or the demo family."""
    x = la.vec(x)
    if len(x) != c.dim:
        raise ValueError(f"point of length {len(x)} for dimension {c.dim}")
    inter = c.intersection()
    if not inter.contains(x):
        raise NotMemberError(f"{x} is not in the intersection")
    if isinstance(inter, (HPolyhedron, Ball)):
        return tangent_cone(inter, x)
    raise UnsupportedError("the intersection has no usable representation")


def _tangent_collection(c: Collection, cones: Sequence[HPolyhedron]) -> Collection:
    return Collection(c.dim, c.norm, tuple(cones), name=f"{c.name}_tangent")


def _primitive(v) -> tuple:
    p = la.primitive(la.vec(v))
    return tuple(Fraction(a) for a in p)


def _closure_variant(c: Collection, x, cap: HPolyhedron) -> tuple[bool, tuple | None]:
    """closure(∩ cone(A_i - x)) == ∩ closure(cone(A_i - x))."""
    open_normals = []
    for s in c.sets:
        _, kind = cone_of_set_minus_point(s, x)
        if kind == "open_halfspace":
            open_normals.append(la.sub(x, s.center))
        elif kind != "closed":
            raise UnsupportedError("closure variant undecidable with this representation")
    if not open_normals:
        return True, None
    # is there d in the closed cap with <n_j, d> < 0 for every open cone?
    n = c.dim
    ineq = [(tuple(r.a) + (Fraction(0),), r.b) for r in cap.ineqs]
    eq = [(tuple(r.a) + (Fraction(0),), r.b) for r in cap.eqs]
    for nj in open_normals:
        ineq.append((tuple(nj) + (Fraction(1),), Fraction(0)))
    ineq.append((la.unit(n + 1, n), Fraction(1)))
    out = linprog(la.unit(n + 1, n), ineq, eq)
    if out.status == "optimal" and out.value > 0:
        return True, None
    if cap.same_set(HPolyhedron.singleton(la.zeros(n))):
        return True, None
    # the strict part is empty, so the left side is {0}; any nonzero cap direction witnesses
    w = inclusion(cap, HPolyhedron.singleton(la.zeros(n))).witness
    return False, _primitive(w)


def _sample_functionals(rng: random.Random, n: int, count: int) -> list[tuple]:
    out = []
    while len(out) < count:
        v = tuple(Fraction(rng.randint(-3, 3)) for _ in range(n))
        if any(v):
            out.append(v)
    return out


def chip_report_at(c: Collection, x, dual_samples: int = 16, seed: int = 0,
                   samples: int = 10_000) -> ChipReport:
    x = la.vec(x)
    t_inter = tangent_of_intersection(c, x)
    members = list(c.sets)
    tangents = [tangent_cone(s, x) for s in members]
    cap = tangents[0].intersect(*tangents[1:]).canonical()
    witnesses: dict = {}
    notes = []

    res = inclusion(cap, t_inter)
    chip = res.holds
    if not chip:
        witnesses["chip"] = _primitive(res.witness)

    closure_ok, w = _closure_variant(c, x, cap)
    if not closure_ok:
        witnesses["chip_closure_variant"] = w

    # strong CHIP: N(∩, x) against the (closed, finitely generated) sum of N(A_i, x)
    gens = [g for s in members for g in normal_cone(s, x).rays]
    sum_cone = GeneratedCone.of(c.dim, gens).to_hpoly()
    n_inter = dual_cone(t_inter)
    res = inclusion(n_inter, sum_cone)
    strong = res.holds
    if not strong:
        witnesses["strong_chip"] = _primitive(res.witness)

    tcol = _tangent_collection(c, tangents)
    constant = lambda_N(tcol, samples=samples, seed=seed)
    normal = closure_ok and constant > 0
    if not normal:
        if constant == 0:
            witnesses["normal_chip"] = normality_inclusion_holds(tcol, Fraction(1, 2**20)).witness
        else:
            witnesses.setdefault("normal_chip", witnesses.get("chip_closure_variant"))
    if not closure_ok:
        notes.append("normal CHIP evaluated on closed cones while the closure variant fails")

    weak = closure_ok
    if weak:
        rng = random.Random(seed)
        funcs = [tuple(r.a) for t in tangents for r in t.rows]
        funcs += [la.neg(r.a) for t in tangents for r in t.rows if r.eq]
        funcs += _sample_functionals(rng, c.dim, dual_samples)
        for f in funcs:
            eta = weak_normal_eta(tcol, f, samples=samples, seed=seed)
            if eta is None or (eta != UNCONSTRAINED and eta != INF and eta <= 0):
                weak = False
                witnesses["weak_normal_chip"] = tuple(f)
                break
    else:
        witnesses.setdefault("weak_normal_chip", witnesses.get("chip_closure_variant"))

    return ChipReport(x, chip, closure_ok, strong, normal, constant, weak, witnesses, tuple(notes))


def points_of_interest(c: Collection, extra: Sequence = ()) -> list[tuple]:
    """User points followed by the vertices of a polyhedral intersection."""
    pts = [la.vec(p) for p in extra]
    inter = c.intersection()
    if isinstance(inter, HPolyhedron):
        for p in inter.to_v().points:
            if p not in pts:
                pts.append(p)
    return pts


def chip_reports(c: Collection, extra: Sequence = (), dual_samples: int = 16, seed: int = 0,
                 samples: int = 10_000) -> list[ChipReport]:
    return [chip_report_at(c, p, dual_samples, seed, samples) for p in points_of_interest(c, extra)]
