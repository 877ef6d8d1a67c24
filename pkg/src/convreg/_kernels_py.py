"""Pure numpy versions of the float kernels.

Same algorithms and argument conventions as the compiled ``_kernels``
module; used when the extension is not built.
"""
from __future__ import annotations

import numpy as np

BACKEND = "python"

_EPS = np.finfo(float).eps
_FEAS_TOL = 1e-7


def nnls(a, b, max_iter: int = -1):
    """Lawson-Hanson non-negative least squares: min |a x - b|, x >= 0."""
    a = np.ascontiguousarray(a, dtype=float)
    b = np.ascontiguousarray(b, dtype=float)
    m, n = a.shape
    if max_iter < 0:
        max_iter = 3 * n + 10
    x = np.zeros(n)
    passive = np.zeros(n, dtype=bool)
    tol = 10.0 * _EPS * max(m, n) * max(1.0, np.abs(a).sum(axis=0).max(initial=0.0))
    w = a.T @ b
    outer = 0
    while outer < max_iter:
        free = ~passive
        if not free.any():
            break
        cand = np.where(free, w, -np.inf)
        j = int(np.argmax(cand))
        if cand[j] <= tol:
            break
        passive[j] = True
        outer += 1
        while True:
            z = np.zeros(n)
            idx = np.flatnonzero(passive)
            sol = _lstsq(a[:, idx], b)
            if sol is None:
                # dependent column: drop the newest entry and stop growing
                passive[j] = False
                z = x.copy()
                outer = max_iter
                break
            z[idx] = sol
            if (z[idx] > tol).all():
                break
            bad = passive & (z <= tol)
            alpha = np.min(x[bad] / (x[bad] - z[bad]))
            x = x + alpha * (z - x)
            passive &= x > tol
            x[~passive] = 0.0
            if not passive.any():
                z = np.zeros(n)
                break
        x = z
        w = a.T @ (b - a @ x)
    return x


def _lstsq(a, b):
    """Least squares by QR; None when a has dependent columns."""
    m, k = a.shape
    if k > m:
        return None
    q, r = np.linalg.qr(a)
    if (np.abs(np.diag(r)) <= _EPS * 1e-4).any():
        return None
    return np.linalg.solve(r, q.T @ b)


def project_polyhedron(a, b, x):
    """Euclidean projection of x onto {y : a y <= b}; (point, distance).

    Solved as the least-distance problem min |z| s.t. (-a) z >= a x - b,
    which Lawson-Hanson reduce to one NNLS.  Distance is inf when the
    region is empty.
    """
    a = np.ascontiguousarray(a, dtype=float)
    b = np.ascontiguousarray(b, dtype=float)
    x = np.ascontiguousarray(x, dtype=float)
    m, n = a.shape
    h = a @ x - b
    if m == 0 or (h <= 0).all():
        return x.copy(), 0.0
    g = -a
    e = np.empty((n + 1, m))
    e[:n] = g.T
    e[n] = h
    f = np.zeros(n + 1)
    f[n] = 1.0
    u = nnls(e, f)
    r = e @ u - f
    if abs(r[n]) <= 1e-14:
        return np.full(n, np.nan), np.inf
    z = -r[:n] / r[n]
    y = x + z
    if (a @ y - b).max() > _FEAS_TOL * (1.0 + np.abs(b).max() + np.abs(y).max()):
        return np.full(n, np.nan), np.inf
    return y, float(np.sqrt(z @ z))


def batch_polyhedron_distance(a, b, xs):
    xs = np.ascontiguousarray(xs, dtype=float)
    out = np.empty(xs.shape[0])
    for k in range(xs.shape[0]):
        out[k] = project_polyhedron(a, b, xs[k])[1]
    return out


def project_cone(gens, v):
    """Projection onto cone(rows of gens)."""
    gens = np.ascontiguousarray(gens, dtype=float)
    v = np.ascontiguousarray(v, dtype=float)
    if gens.shape[0] == 0:
        return np.zeros_like(v)
    if gens.shape[0] == 1:
        g = gens[0]
        t = (g @ v) / (g @ g)
        return g * max(t, 0.0)
    c = nnls(gens.T, v)
    return gens.T @ c


def min_decomposition(gens, offsets, xstar, iters: int, step: float):
    """Douglas-Rachford for min sum |w_i| s.t. sum w_i = xstar, w_i in cone_i.

    ``gens`` stacks the generators of every cone row-wise; cone i owns rows
    ``offsets[i]:offsets[i+1]``.  Returns (terms, value, residual).
    """
    gens = np.ascontiguousarray(gens, dtype=float)
    xstar = np.ascontiguousarray(xstar, dtype=float)
    m = len(offsets) - 1
    n = xstar.shape[0]
    z = np.tile(xstar / m, (m, 1))
    w = np.zeros((m, n))
    for _ in range(iters + 1):
        y = z + (xstar - z.sum(axis=0)) / m
        v = 2.0 * y - z
        for i in range(m):
            p = project_cone(gens[offsets[i]:offsets[i + 1]], v[i])
            nrm = float(np.sqrt(p @ p))
            w[i] = p * (1.0 - step / nrm) if nrm > step else 0.0
        z = z + w - y
    value = float(np.sqrt((w * w).sum(axis=1)).sum())
    res = w.sum(axis=0) - xstar
    return w, value, float(np.sqrt(res @ res))


def batch_min_decomposition(gens, offsets, xs, iters: int, step: float):
    xs = np.ascontiguousarray(xs, dtype=float)
    vals = np.empty(xs.shape[0])
    for k in range(xs.shape[0]):
        vals[k] = min_decomposition(gens, offsets, xs[k], iters, step)[1]
    return vals


def batch_cone_distance_ratio(gens, offsets, sum_gens, xs):
    """|P_sum(u)| / max_i |P_i(u)| for each row u of xs (0 when both vanish)."""
    gens = np.ascontiguousarray(gens, dtype=float)
    xs = np.ascontiguousarray(xs, dtype=float)
    m = len(offsets) - 1
    out = np.empty(xs.shape[0])
    for k in range(xs.shape[0]):
        u = xs[k]
        top = project_cone(sum_gens, u)
        num = float(np.sqrt(top @ top))
        den = 0.0
        for i in range(m):
            p = project_cone(gens[offsets[i]:offsets[i + 1]], u)
            den = max(den, float(np.sqrt(p @ p)))
        out[k] = num / den if den > 0 else (np.inf if num > 0 else 0.0)
    return out
