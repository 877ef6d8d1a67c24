"""Named demo instances and seeded random suites."""
from __future__ import annotations

import random
from fractions import Fraction

from . import linalg as la
from .polyhedra import HPolyhedron, Row
from .sets import Ball, Collection, NormContext, ShrinkingIntervalFamily


def halfspace(a, b=0) -> HPolyhedron:
    return HPolyhedron.from_constraints(len(a), [(a, b)])


def line(a) -> HPolyhedron:
    """The line {x : a.x = 0} in the plane."""
    return HPolyhedron.from_constraints(len(a), eq=[(a, 0)])


def right_angle(kind: str = "linf", mode: str | None = None) -> Collection:
    mode = mode or ("float" if kind == "l2" else "exact")
    return Collection(2, NormContext(kind, mode), (halfspace((1, 0)), halfspace((0, 1))),
                      name="right_angle")


def ball_tangency() -> Collection:
    ball = Ball((Fraction(0), Fraction(1)), Fraction(1))
    return Collection(2, NormContext("l2", "float"), (ball, halfspace((0, 1))),
                      intersection_override=HPolyhedron.singleton((0, 0)), name="ball_tangency")


def shrinking_intervals() -> Collection:
    return Collection(1, NormContext("l2", "exact"), (ShrinkingIntervalFamily(),),
                      name="shrinking_intervals")


def lines_45() -> Collection:
    return Collection(2, NormContext("l2", "exact"), (line((1, -1)), line((0, 1))), name="lines_45")


def orthogonal_lines() -> Collection:
    return Collection(2, NormContext("l2", "exact"), (line((0, 1)), line((1, 0))),
                      name="orthogonal_lines")


def box_pair(kind: str = "linf") -> Collection:
    return Collection(2, NormContext(kind, "exact"),
                      (HPolyhedron.box(2, 0, 2), HPolyhedron.box(2, 1, 3)), name="box_pair")


def box_and_quadrant(kind: str = "linf") -> Collection:
    """A box around 0 and the nonnegative quadrant; both contain the origin."""
    quadrant = HPolyhedron.from_constraints(2, [((-1, 0), 0), ((0, -1), 0)])
    return Collection(2, NormContext(kind, "exact"), (HPolyhedron.box(2, -1, 1), quadrant),
                      name="box_and_quadrant")


def whole_space(dim: int = 2, kind: str = "linf") -> Collection:
    return Collection(dim, NormContext(kind, "exact"), (HPolyhedron.whole(dim),), name="whole_space")


def _normal(rng: random.Random, n: int, bound: int = 2) -> tuple:
    while True:
        a = tuple(rng.randint(-bound, bound) for _ in range(n))
        if any(a):
            return la.primitive_int(a)


def random_cone_collection(seed: int, kind: str = "linf") -> Collection:
    """2 to 4 halfspace cones {a.x <= 0} in dimension 2 or 3, small integer a."""
    rng = random.Random(seed)
    n = rng.choice((2, 3))
    m = rng.randint(2, 4)
    sets = tuple(halfspace(_normal(rng, n)) for _ in range(m))
    return Collection(n, NormContext(kind, "exact"), sets, name=f"cones_{seed}")


def cone_suite(count: int = 20, seed: int = 0, kind: str = "linf") -> list[Collection]:
    return [random_cone_collection(seed * 1000 + k, kind) for k in range(count)]


def random_polytope_with_origin(rng: random.Random, n: int, max_facets: int = 6,
                                bound: int = 3) -> HPolyhedron:
    """Bounded polytope {a_j.x <= b_j} with b_j > 0, so 0 is interior."""
    while True:
        k = rng.randint(n + 1, max_facets)
        rows = [Row(la.vec(_normal(rng, n, bound)), Fraction(rng.randint(1, 4), rng.randint(1, 3)))
                for _ in range(k)]
        p = HPolyhedron(n, tuple(rows))
        if p.to_v().rays == ():
            return p


def polytope_suite(count: int = 100, seed: int = 0) -> list[HPolyhedron]:
    rng = random.Random(seed)
    return [random_polytope_with_origin(rng, rng.randint(1, 3)) for _ in range(count)]


def random_set_with_origin(rng: random.Random, n: int, rows: tuple = (1, 4)) -> HPolyhedron:
    """Polyhedron containing 0: some rows through 0, some with positive offset."""
    k = rng.randint(*rows)
    rows = []
    for _ in range(k):
        b = rng.choice((Fraction(0), Fraction(rng.randint(1, 3), rng.randint(1, 2))))
        rows.append(Row(la.vec(_normal(rng, n)), b))
    return HPolyhedron(n, tuple(rows))


def pair_suite(count: int = 50, seed: int = 0) -> list[tuple[HPolyhedron, HPolyhedron]]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(1, 3)
        out.append((random_set_with_origin(rng, n), random_set_with_origin(rng, n)))
    return out


def polyhedral_suite(count: int = 20, seed: int = 0, kind: str = "linf") -> list[Collection]:
    """Collections of 2 or 3 polyhedra containing 0 (not necessarily cones)."""
    rng = random.Random(seed)
    out = []
    for k in range(count):
        n = rng.randint(2, 3)
        sets = tuple(random_set_with_origin(rng, n, (n, n + 1)) for _ in range(2))
        out.append(Collection(n, NormContext(kind, "exact"), sets, name=f"poly_{seed}_{k}"))
    return out


NAMED = {
    "right_angle": right_angle,
    "ball_tangency": ball_tangency,
    "shrinking_intervals": shrinking_intervals,
    "lines_45": lines_45,
    "orthogonal_lines": orthogonal_lines,
    "box_pair": box_pair,
    "box_and_quadrant": box_and_quadrant,
    "whole_space": whole_space,
}
