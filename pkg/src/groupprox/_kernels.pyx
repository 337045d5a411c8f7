# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled blockwise proximal kernels.

C mirror of ``groupprox._kernels_py``: identical candidate scan, root
formulas, and tie preferences, with the whole group loop running without
the GIL.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport acos, cos, fabs, pow, sqrt

cnp.import_array()

BACKEND = "compiled"

cdef double TIE_REL = 1e-10
cdef double BOUNDARY_GUARD = 1e-12
cdef double FEAS_GUARD = 1e-9
cdef double TWO_THIRDS = 2.0 / 3.0


cdef inline double _threshold_c(double nu, double q) nogil:
    return (2.0 - q) / (2.0 * (1.0 - q)) * pow(2.0 * nu * (1.0 - q), 1.0 / (2.0 - q))


cdef inline double _t_hat(double nu_s, double q) nogil:
    return pow(nu_s * q * (1.0 - q), 1.0 / (2.0 - q))


cdef inline double _t_tilde(double nu_s, double q) nogil:
    return (2.0 - q) * pow(nu_s * q / pow(1.0 - q, 1.0 - q), 1.0 / (2.0 - q))


cdef double _root_half(double nu_s, double b) nogil:
    cdef double arg = -0.75 * sqrt(3.0) * nu_s / (b * sqrt(b))
    if arg < -1.0:
        arg = -1.0
    elif arg > 1.0:
        arg = 1.0
    cdef double c = cos(acos(arg) / 3.0)
    return (4.0 * b / 3.0) * c * c


cdef double _root_two_thirds(double nu_s, double b) nogil:
    cdef double A = b * b / 16.0
    cdef double C = 8.0 * nu_s * nu_s * nu_s / 729.0
    cdef double D = A * A - C
    cdef double u, t, s2t, inner, w
    if D < 0.0:
        D = 0.0
    u = pow(A + sqrt(D), 1.0 / 3.0)
    t = u + pow(C, 1.0 / 3.0) / u
    s2t = sqrt(2.0 * t)
    inner = 2.0 * b / s2t - 2.0 * t
    if inner < 0.0:
        inner = 0.0
    w = s2t + sqrt(inner)
    return 0.125 * w * w * w


cdef double _root_generic(double nu_s, double q, double b, double lo) nogil:
    cdef double K = nu_s * q
    cdef double hi = b
    cdef double t = b
    cdef double g = K * pow(b, q - 1.0)
    cdef double dg, t_new
    cdef int i
    for i in range(200):
        if fabs(g) <= 1e-12 * (1.0 + b):
            break
        if g > 0.0:
            hi = t
        else:
            lo = t
        dg = 1.0 + K * (q - 1.0) * pow(t, q - 2.0)
        if dg > 0.0:
            t_new = t - g / dg
            if not (lo < t_new < hi):
                t_new = 0.5 * (lo + hi)
        else:
            t_new = 0.5 * (lo + hi)
        t = t_new
        g = t + K * pow(t, q - 1.0) - b
    return t


cdef double _largest_root(double nu_s, double q, double b) nogil:
    cdef double tt = _t_tilde(nu_s, q)
    if b <= tt:
        return _t_hat(nu_s, q)
    if q == 0.5:
        return _root_half(nu_s, b)
    if q == TWO_THIRDS:
        return _root_two_thirds(nu_s, b)
    return _root_generic(nu_s, q, b, _t_hat(nu_s, q))


cdef double _select_scalar(double nu, double q, double at) nogil:
    cdef double j_zero, j_root, tie, c, r
    if q == 1.0:
        return at - nu if at > nu else 0.0
    if at == 0.0:
        return 0.0
    if q == 0.0:
        j_zero = 0.5 * at * at
        tie = TIE_REL * (1.0 + (j_zero if j_zero < nu else nu))
        return at if nu <= j_zero + tie else 0.0
    c = _threshold_c(nu, q)
    if at < c * (1.0 - 1e-9):
        return 0.0
    r = _largest_root(nu, q, at)
    j_zero = 0.5 * at * at
    j_root = nu * pow(r, q) + 0.5 * (r - at) * (r - at)
    tie = TIE_REL * (1.0 + j_zero)
    return r if j_root <= j_zero + tie else 0.0


cdef void _sort_desc(double* z, long long* pos, int n) nogil:
    # Stable insertion sort, descending; groups are small in practice.
    cdef int i, j
    cdef double key
    cdef long long keypos
    for i in range(1, n):
        key = z[i]
        keypos = pos[i]
        j = i
        while j > 0 and z[j - 1] < key:
            z[j] = z[j - 1]
            pos[j] = pos[j - 1]
            j -= 1
        z[j] = key
        pos[j] = keypos


cdef void _block_l1q_fractional(
    const double* v,
    double* out,
    double* z,
    long long* pos,
    double* suffix,
    double* js,
    double* cs,
    long long* feas,
    const long long* indices,
    long long off,
    int n,
    double nu,
    double q,
) nogil:
    cdef int i, s, nfeas, s_best
    cdef long long idx
    cdef double kyfan, tt, a, c, band, j, j_zero, j_min, j_star, tie, c_best, val

    for i in range(n):
        idx = indices[off + i]
        z[i] = fabs(v[idx])
        pos[i] = idx
    _sort_desc(z, pos, n)
    if z[0] == 0.0:
        return

    suffix[n] = 0.0
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + z[i] * z[i]
    j_zero = 0.5 * suffix[0]

    nfeas = 0
    kyfan = 0.0
    for s in range(1, n + 1):
        kyfan += z[s - 1]
        tt = _t_tilde(nu * s, q)
        if kyfan < tt * (1.0 - BOUNDARY_GUARD):
            continue
        a = _largest_root(nu * s, q, kyfan)
        c = nu * q * pow(a, q - 1.0)
        band = FEAS_GUARD * (1.0 + c)
        if not z[s - 1] > c - band:
            continue
        if s < n and not z[s] <= c + band:
            continue
        j = nu * pow(a, q) + (kyfan - a) * (kyfan - a) / (2.0 * s) + 0.5 * suffix[s]
        feas[nfeas] = s
        js[nfeas] = j
        cs[nfeas] = c
        nfeas += 1

    if nfeas == 0:
        return
    j_min = js[0]
    for i in range(1, nfeas):
        if js[i] < j_min:
            j_min = js[i]
    j_star = j_min
    if z[0] <= _threshold_c(nu, q) and j_zero < j_star:
        j_star = j_zero
    tie = TIE_REL * (1.0 + j_star)
    if j_min > j_star + tie:
        return
    s_best = 0
    c_best = 0.0
    for i in range(nfeas):
        if js[i] <= j_star + tie and <int> feas[i] > s_best:
            s_best = <int> feas[i]
            c_best = cs[i]
    for i in range(s_best):
        idx = pos[i]
        val = z[i] - c_best
        if val < 0.0:
            val = 0.0
        out[idx] = val if v[idx] >= 0.0 else -val


cdef void _block_l1q(
    const double* v,
    double* out,
    double* z,
    long long* pos,
    double* suffix,
    double* js,
    double* cs,
    long long* feas,
    const long long* indices,
    long long off,
    int n,
    double nu,
    double q,
) nogil:
    cdef int i
    cdef long long idx
    cdef double av, j_zero, tie
    if q == 1.0:
        for i in range(n):
            idx = indices[off + i]
            av = fabs(v[idx]) - nu
            if av > 0.0:
                out[idx] = av if v[idx] >= 0.0 else -av
        return
    if q == 0.0:
        j_zero = 0.0
        for i in range(n):
            idx = indices[off + i]
            j_zero += v[idx] * v[idx]
        j_zero *= 0.5
        tie = TIE_REL * (1.0 + (j_zero if j_zero < nu else nu))
        if nu <= j_zero + tie:
            for i in range(n):
                idx = indices[off + i]
                out[idx] = v[idx]
        return
    _block_l1q_fractional(v, out, z, pos, suffix, js, cs, feas, indices, off, n, nu, q)


cdef void _block_l2q(
    const double* v,
    double* out,
    const long long* indices,
    long long off,
    int n,
    double nu,
    double q,
) nogil:
    cdef int i
    cdef long long idx
    cdef double r2 = 0.0, r, val, scale
    for i in range(n):
        idx = indices[off + i]
        r2 += v[idx] * v[idx]
    if r2 == 0.0:
        return
    r = sqrt(r2)
    val = _select_scalar(nu, q, r)
    if val == 0.0:
        return
    scale = val / r
    for i in range(n):
        idx = indices[off + i]
        out[idx] = scale * v[idx]


def blockwise_prox(
    double[::1] v,
    long long[::1] indices,
    long long[::1] offsets,
    double weight,
    int p,
    double q,
    double[::1] out,
):
    """Apply the solver-facing block prox group by group into ``out``."""
    cdef Py_ssize_t ngroups = offsets.shape[0] - 1
    cdef Py_ssize_t g
    cdef long long off, off2
    cdef int n, nmax = 1
    for g in range(ngroups):
        n = <int> (offsets[g + 1] - offsets[g])
        if n > nmax:
            nmax = n

    scratch_z = np.empty(nmax, dtype=np.float64)
    scratch_pos = np.empty(nmax, dtype=np.int64)
    scratch_suffix = np.empty(nmax + 1, dtype=np.float64)
    scratch_js = np.empty(nmax, dtype=np.float64)
    scratch_cs = np.empty(nmax, dtype=np.float64)
    scratch_feas = np.empty(nmax, dtype=np.int64)
    cdef double[::1] z = scratch_z
    cdef long long[::1] pos = scratch_pos
    cdef double[::1] suffix = scratch_suffix
    cdef double[::1] js = scratch_js
    cdef double[::1] cs = scratch_cs
    cdef long long[::1] feas = scratch_feas

    with nogil:
        for g in range(ngroups):
            off = offsets[g]
            n = <int> (offsets[g + 1] - off)
            for off2 in range(off, offsets[g + 1]):
                out[indices[off2]] = 0.0
            if p == 1:
                _block_l1q(
                    &v[0], &out[0], &z[0], &pos[0], &suffix[0], &js[0], &cs[0],
                    &feas[0], &indices[0], off, n, weight, q,
                )
            else:
                _block_l2q(&v[0], &out[0], &indices[0], off, n, weight, q)
    return np.asarray(out)
