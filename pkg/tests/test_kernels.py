from __future__ import annotations

import numpy as np
import pytest

from convreg import _kernels_py, kernels

try:
    from convreg import _kernels as _kernels_cy
except ImportError:  # extension not built
    _kernels_cy = None

BACKENDS = [_kernels_py] + ([_kernels_cy] if _kernels_cy is not None else [])
RTOL = 1e-9


def _gens(seed):
    rng = np.random.default_rng(seed)
    return rng.normal(size=(6, 3)), np.array([0, 2, 4, 6], dtype=np.intp), rng.normal(size=(20, 3))


@pytest.mark.parametrize("k", BACKENDS, ids=lambda m: m.BACKEND)
class TestKernels:
    def test_nnls_kkt(self, k):
        rng = np.random.default_rng(1)
        a, b = rng.normal(size=(5, 3)), rng.normal(size=5)
        x = np.asarray(k.nnls(a, b))
        grad = a.T @ (a @ x - b)
        assert (x >= 0).all()
        assert np.all(grad >= -1e-9)
        assert abs(grad @ x) < 1e-9

    def test_project_cone_quadrant(self, k):
        p = k.project_cone(np.eye(2), np.array([-1.0, 2.0]))
        assert p == pytest.approx([0.0, 2.0])

    def test_project_polyhedron_box(self, k):
        a = np.array([[1.0, 0], [-1, 0], [0, 1], [0, -1]])
        point, dist = k.project_polyhedron(a, np.ones(4), np.array([3.0, 0.5]))
        assert point == pytest.approx([1.0, 0.5]) and dist == pytest.approx(2.0)

    def test_min_decomposition_feasible(self, k):
        gens, offsets, xs = _gens(2)
        x = gens[0] + 2 * gens[3]
        terms, value, residual = k.min_decomposition(gens, offsets, x, 3000, 0.05)
        assert residual < 1e-3
        assert value <= np.linalg.norm(gens[0]) + 2 * np.linalg.norm(gens[3]) + 1e-3


@pytest.mark.skipif(_kernels_cy is None, reason="compiled kernels not built")
class TestBackendAgreement:
    def test_polyhedron_distance(self):
        rng = np.random.default_rng(3)
        a, b, xs = rng.normal(size=(6, 3)), rng.uniform(0.5, 2, 6), rng.normal(size=(50, 3)) * 3
        assert _kernels_cy.batch_polyhedron_distance(a, b, xs) == pytest.approx(
            _kernels_py.batch_polyhedron_distance(a, b, xs), rel=RTOL, abs=1e-12)

    def test_cone_ratio(self):
        gens, offsets, xs = _gens(4)
        assert _kernels_cy.batch_cone_distance_ratio(gens, offsets, gens, xs) == pytest.approx(
            _kernels_py.batch_cone_distance_ratio(gens, offsets, gens, xs), rel=RTOL)

    def test_min_decomposition(self):
        gens, offsets, xs = _gens(5)
        assert _kernels_cy.batch_min_decomposition(gens, offsets, xs[:5], 200, 0.1) == pytest.approx(
            _kernels_py.batch_min_decomposition(gens, offsets, xs[:5], 200, 0.1), rel=1e-7)


def test_selector_exposes_a_backend():
    assert kernels.BACKEND in ("cython", "python")
