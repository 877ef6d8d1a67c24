from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from convreg.instances import random_set_with_origin
from convreg.polyhedra import HPolyhedron

settings.register_profile("convreg", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("convreg")

small_fraction = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


@st.composite
def sets_with_origin(draw, dim=None):
    n = draw(st.integers(1, 3)) if dim is None else dim
    seed = draw(st.integers(0, 10**6))
    return random_set_with_origin(random.Random(seed), n)


@st.composite
def set_pairs(draw):
    n = draw(st.integers(1, 3))
    return draw(sets_with_origin(n)), draw(sets_with_origin(n))


@st.composite
def points(draw, dim):
    return tuple(draw(st.lists(small_fraction, min_size=dim, max_size=dim)))


def cone(*normals) -> HPolyhedron:
    return HPolyhedron.from_constraints(len(normals[0]), [(a, 0) for a in normals])
