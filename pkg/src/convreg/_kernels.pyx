# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled float kernels: NNLS, least-distance projection, cone projection
and Douglas-Rachford decomposition.  Mirrors ``_kernels_py``.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, INFINITY, NAN

cnp.import_array()

BACKEND = "cython"

cdef double _EPS = 2.220446049250313e-16
cdef double _FEAS_TOL = 1e-7


cdef int _lstsq(double[:, ::1] a, double[::1] b, int[::1] idx, int k,
                double[::1] out, double[:, ::1] work, double[::1] rhs) noexcept:
    """Least squares on columns idx[:k] of a via Householder QR.

    Writes the solution into out[:k]; returns 0, or 1 on rank deficiency.
    """
    cdef int m = a.shape[0]
    cdef int i, j, c, r
    cdef double s, nrm, alpha, beta, vj
    for i in range(m):
        rhs[i] = b[i]
        for j in range(k):
            work[i, j] = a[i, idx[j]]
    cdef int steps = k if k < m else m
    for c in range(steps):
        nrm = 0.0
        for i in range(c, m):
            nrm += work[i, c] * work[i, c]
        nrm = sqrt(nrm)
        if nrm == 0.0:
            return 1
        alpha = -nrm if work[c, c] >= 0 else nrm
        # v = x - alpha e1 stored in place of column c
        work[c, c] -= alpha
        beta = 0.0
        for i in range(c, m):
            beta += work[i, c] * work[i, c]
        if beta == 0.0:
            work[c, c] = alpha
            continue
        for j in range(c + 1, k):
            s = 0.0
            for i in range(c, m):
                s += work[i, c] * work[i, j]
            s = 2.0 * s / beta
            for i in range(c, m):
                work[i, j] -= s * work[i, c]
        s = 0.0
        for i in range(c, m):
            s += work[i, c] * rhs[i]
        s = 2.0 * s / beta
        for i in range(c, m):
            rhs[i] -= s * work[i, c]
        work[c, c] = alpha
    if k > m:
        return 1
    for r in range(k - 1, -1, -1):
        s = rhs[r]
        for j in range(r + 1, k):
            s -= work[r, j] * out[j]
        if fabs(work[r, r]) <= _EPS * 1e-4:
            return 1
        out[r] = s / work[r, r]
    return 0


cdef void _nnls(double[:, ::1] a, double[::1] b, double[::1] x, int max_iter,
                int[::1] idx, double[::1] zp, double[:, ::1] work, double[::1] rhs,
                double[::1] w, double[::1] z, char[::1] passive) noexcept:
    cdef int m = a.shape[0]
    cdef int n = a.shape[1]
    cdef int i, j, jbest, k, outer = 0, status
    cdef double tol, colsum, best, alpha, t, s
    cdef bint ok
    tol = 1.0
    for j in range(n):
        colsum = 0.0
        for i in range(m):
            colsum += fabs(a[i, j])
        if colsum > tol:
            tol = colsum
    tol = 10.0 * _EPS * (m if m > n else n) * tol
    for j in range(n):
        x[j] = 0.0
        passive[j] = 0
    if max_iter < 0:
        max_iter = 3 * n + 10
    # w = a^T (b - a x)
    for j in range(n):
        s = 0.0
        for i in range(m):
            s += a[i, j] * b[i]
        w[j] = s
    while outer < max_iter:
        jbest = -1
        best = -INFINITY
        for j in range(n):
            if not passive[j] and w[j] > best:
                best = w[j]
                jbest = j
        if jbest < 0 or best <= tol:
            break
        passive[jbest] = 1
        outer += 1
        while True:
            k = 0
            for j in range(n):
                z[j] = 0.0
                if passive[j]:
                    idx[k] = j
                    k += 1
            status = _lstsq(a, b, idx, k, zp, work, rhs)
            if status != 0:
                # dependent column: drop the newest entry and stop growing
                passive[jbest] = 0
                for j in range(n):
                    z[j] = x[j]
                outer = max_iter
                break
            ok = True
            for j in range(k):
                z[idx[j]] = zp[j]
                if zp[j] <= tol:
                    ok = False
            if ok:
                break
            alpha = INFINITY
            for j in range(n):
                if passive[j] and z[j] <= tol:
                    t = x[j] / (x[j] - z[j])
                    if t < alpha:
                        alpha = t
            k = 0
            for j in range(n):
                x[j] = x[j] + alpha * (z[j] - x[j])
                if passive[j] and x[j] <= tol:
                    passive[j] = 0
                if not passive[j]:
                    x[j] = 0.0
                else:
                    k += 1
            if k == 0:
                for j in range(n):
                    z[j] = 0.0
                break
        for j in range(n):
            x[j] = z[j]
        for j in range(n):
            s = 0.0
            for i in range(m):
                t = b[i]
                for k in range(n):
                    t -= a[i, k] * x[k]
                s += a[i, j] * t
            w[j] = s


cdef class _Scratch:
    cdef public object idx, zp, work, rhs, w, z, passive

    def __init__(self, int m, int n):
        self.idx = np.zeros(n, dtype=np.intc)
        self.zp = np.zeros(n)
        self.work = np.zeros((m, n))
        self.rhs = np.zeros(m)
        self.w = np.zeros(n)
        self.z = np.zeros(n)
        self.passive = np.zeros(n, dtype=np.int8)


cdef void _nnls_s(double[:, ::1] a, double[::1] b, double[::1] x, int max_iter, _Scratch s):
    _nnls(a, b, x, max_iter, s.idx, s.zp, s.work, s.rhs, s.w, s.z, s.passive)


def nnls(a, b, int max_iter=-1):
    cdef double[:, ::1] av = np.ascontiguousarray(a, dtype=float)
    cdef double[::1] bv = np.ascontiguousarray(b, dtype=float)
    x = np.zeros(av.shape[1])
    _nnls_s(av, bv, x, max_iter, _Scratch(av.shape[0], av.shape[1]))
    return x


cdef double _project_polyhedron(double[:, ::1] a, double[::1] b, double[::1] x,
                                double[::1] out, double[:, ::1] e, double[::1] f,
                                double[::1] u, _Scratch s) noexcept:
    cdef int m = a.shape[0]
    cdef int n = a.shape[1]
    cdef int i, j
    cdef double h, r, d2, rn
    cdef bint inside = True
    for i in range(m):
        h = -b[i]
        for j in range(n):
            h += a[i, j] * x[j]
        e[n, i] = h
        if h > 0:
            inside = False
        for j in range(n):
            e[j, i] = -a[i, j]
    if inside:
        for j in range(n):
            out[j] = x[j]
        return 0.0
    for j in range(n):
        f[j] = 0.0
    f[n] = 1.0
    _nnls_s(e, f, u, -1, s)
    # r = e u - f
    rn = -1.0
    for i in range(m):
        rn += e[n, i] * u[i]
    if fabs(rn) <= 1e-14:
        for j in range(n):
            out[j] = NAN
        return INFINITY
    d2 = 0.0
    cdef double scale = 1.0, worst = -INFINITY
    for j in range(n):
        r = 0.0
        for i in range(m):
            r += e[j, i] * u[i]
        r = -r / rn
        out[j] = x[j] + r
        d2 += r * r
        if fabs(out[j]) > scale - 1.0:
            scale = 1.0 + fabs(out[j])
    cdef double bmax = 0.0
    for i in range(m):
        if fabs(b[i]) > bmax:
            bmax = fabs(b[i])
        h = -b[i]
        for j in range(n):
            h += a[i, j] * out[j]
        if h > worst:
            worst = h
    if worst > _FEAS_TOL * (scale + bmax):
        for j in range(n):
            out[j] = NAN
        return INFINITY
    return sqrt(d2)


def project_polyhedron(a, b, x):
    cdef double[:, ::1] av = np.ascontiguousarray(a, dtype=float)
    cdef double[::1] bv = np.ascontiguousarray(b, dtype=float)
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=float)
    cdef int m = av.shape[0]
    cdef int n = av.shape[1]
    out = np.empty(n)
    if m == 0:
        out[:] = xv
        return out, 0.0
    e = np.empty((n + 1, m))
    d = _project_polyhedron(av, bv, xv, out, e, np.empty(n + 1), np.empty(m), _Scratch(n + 1, m))
    return out, float(d)


def batch_polyhedron_distance(a, b, xs):
    cdef double[:, ::1] av = np.ascontiguousarray(a, dtype=float)
    cdef double[::1] bv = np.ascontiguousarray(b, dtype=float)
    cdef double[:, ::1] xv = np.ascontiguousarray(xs, dtype=float)
    cdef int m = av.shape[0]
    cdef int n = av.shape[1]
    cdef Py_ssize_t k, count = xv.shape[0]
    res = np.zeros(count)
    if m == 0:
        return res
    cdef double[::1] rv = res
    cdef double[::1] out = np.empty(n)
    cdef double[:, ::1] e = np.empty((n + 1, m))
    cdef double[::1] f = np.empty(n + 1)
    cdef double[::1] u = np.empty(m)
    cdef _Scratch s = _Scratch(n + 1, m)
    for k in range(count):
        rv[k] = _project_polyhedron(av, bv, xv[k], out, e, f, u, s)
    return res


cdef void _project_cone(double[:, ::1] gt, double[::1] v, double[::1] out,
                        double[::1] coef, _Scratch s) noexcept:
    """Projection onto cone(columns of gt); gt is n x k."""
    cdef int n = gt.shape[0]
    cdef int k = gt.shape[1]
    cdef int i, j
    cdef double t, gg, gv
    if k == 0:
        for i in range(n):
            out[i] = 0.0
        return
    if k == 1:
        gg = 0.0
        gv = 0.0
        for i in range(n):
            gg += gt[i, 0] * gt[i, 0]
            gv += gt[i, 0] * v[i]
        t = gv / gg
        if t < 0:
            t = 0.0
        for i in range(n):
            out[i] = gt[i, 0] * t
        return
    _nnls_s(gt, v, coef, -1, s)
    for i in range(n):
        t = 0.0
        for j in range(k):
            t += gt[i, j] * coef[j]
        out[i] = t


def project_cone(gens, v):
    g = np.ascontiguousarray(gens, dtype=float)
    cdef double[::1] vv = np.ascontiguousarray(v, dtype=float)
    out = np.zeros(vv.shape[0])
    if g.shape[0] == 0:
        return out
    gt = np.ascontiguousarray(g.T)
    _project_cone(gt, vv, out, np.zeros(g.shape[0]), _Scratch(gt.shape[0], gt.shape[1]))
    return out


cdef class _Cones:
    cdef public list gts, coefs, scratch
    cdef public int m

    def __init__(self, gens, offsets):
        g = np.ascontiguousarray(gens, dtype=float)
        self.m = len(offsets) - 1
        self.gts, self.coefs, self.scratch = [], [], []
        for i in range(self.m):
            block = np.ascontiguousarray(g[offsets[i]:offsets[i + 1]].T)
            if block.shape[1] == 0:
                block = np.zeros((g.shape[1], 0))
            self.gts.append(block)
            self.coefs.append(np.zeros(block.shape[1]))
            self.scratch.append(_Scratch(block.shape[0], max(block.shape[1], 1)))


cdef double _min_decomposition(_Cones cones, double[::1] xstar, int iters, double step,
                               double[:, ::1] z, double[:, ::1] w, double[::1] y,
                               double[::1] v, double* residual):
    cdef int m = cones.m
    cdef int n = xstar.shape[0]
    cdef int it, i, j
    cdef double nrm, fac, value, r
    cdef double[::1] tmp = np.empty(n)
    for i in range(m):
        for j in range(n):
            z[i, j] = xstar[j] / m
    for it in range(iters + 1):
        for j in range(n):
            r = xstar[j]
            for i in range(m):
                r -= z[i, j]
            tmp[j] = r / m
        for i in range(m):
            for j in range(n):
                y[j] = z[i, j] + tmp[j]
                v[j] = 2.0 * y[j] - z[i, j]
            _project_cone(cones.gts[i], v, w[i], cones.coefs[i], cones.scratch[i])
            nrm = 0.0
            for j in range(n):
                nrm += w[i, j] * w[i, j]
            nrm = sqrt(nrm)
            fac = 1.0 - step / nrm if nrm > step else 0.0
            for j in range(n):
                w[i, j] *= fac
                z[i, j] += w[i, j] - y[j]
    value = 0.0
    for i in range(m):
        nrm = 0.0
        for j in range(n):
            nrm += w[i, j] * w[i, j]
        value += sqrt(nrm)
    nrm = 0.0
    for j in range(n):
        r = -xstar[j]
        for i in range(m):
            r += w[i, j]
        nrm += r * r
    residual[0] = sqrt(nrm)
    return value


def min_decomposition(gens, offsets, xstar, int iters, double step):
    cdef _Cones cones = _Cones(gens, offsets)
    cdef double[::1] xv = np.ascontiguousarray(xstar, dtype=float)
    cdef int n = xv.shape[0]
    w = np.zeros((cones.m, n))
    cdef double res = 0.0
    value = _min_decomposition(cones, xv, iters, step, np.zeros((cones.m, n)), w,
                               np.zeros(n), np.zeros(n), &res)
    return w, float(value), float(res)


def batch_min_decomposition(gens, offsets, xs, int iters, double step):
    cdef _Cones cones = _Cones(gens, offsets)
    cdef double[:, ::1] xv = np.ascontiguousarray(xs, dtype=float)
    cdef int n = xv.shape[1]
    cdef Py_ssize_t k, count = xv.shape[0]
    vals = np.empty(count)
    cdef double[::1] out = vals
    cdef double[:, ::1] z = np.zeros((cones.m, n))
    cdef double[:, ::1] w = np.zeros((cones.m, n))
    cdef double[::1] y = np.zeros(n)
    cdef double[::1] v = np.zeros(n)
    cdef double res = 0.0
    for k in range(count):
        out[k] = _min_decomposition(cones, xv[k], iters, step, z, w, y, v, &res)
    return vals


def batch_cone_distance_ratio(gens, offsets, sum_gens, xs):
    cdef _Cones cones = _Cones(gens, offsets)
    cdef _Cones total = _Cones(sum_gens, [0, len(sum_gens)])
    cdef double[:, ::1] xv = np.ascontiguousarray(xs, dtype=float)
    cdef int n = xv.shape[1]
    cdef int m = cones.m
    cdef Py_ssize_t k, count = xv.shape[0]
    cdef int i, j
    cdef double num, den, t
    vals = np.empty(count)
    cdef double[::1] out = vals
    cdef double[::1] p = np.zeros(n)
    for k in range(count):
        _project_cone(total.gts[0], xv[k], p, total.coefs[0], total.scratch[0])
        num = 0.0
        for j in range(n):
            num += p[j] * p[j]
        num = sqrt(num)
        den = 0.0
        for i in range(m):
            _project_cone(cones.gts[i], xv[k], p, cones.coefs[i], cones.scratch[i])
            t = 0.0
            for j in range(n):
                t += p[j] * p[j]
            t = sqrt(t)
            if t > den:
                den = t
        if den > 0:
            out[k] = num / den
        else:
            out[k] = INFINITY if num > 0 else 0.0
    return vals
