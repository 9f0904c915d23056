# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the two hot loops.

Both functions mirror ``extremaldep._fallback`` exactly in semantics
(selection order, tie handling, degenerate cases) and release the GIL.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport log, fabs, pow, INFINITY, NAN
from libc.stdlib cimport malloc, free

cnp.import_array()


cdef inline void _select_top(const double[::1] r, const cnp.int64_t[:] row, Py_ssize_t m,
                             Py_ssize_t k, double* top_r, cnp.int64_t* top_j) noexcept nogil:
    # descending insertion; strict comparison keeps earlier draws first among ties
    cdef Py_ssize_t j, p, q, filled = 0
    cdef double v
    for j in range(m):
        v = r[row[j]]
        if filled == k and not (v > top_r[k - 1]):
            continue
        p = filled if filled < k else k - 1
        while p > 0 and top_r[p - 1] < v:
            p -= 1
        q = filled if filled < k else k - 1
        while q > p:
            top_r[q] = top_r[q - 1]
            top_j[q] = top_j[q - 1]
            q -= 1
        top_r[p] = v
        top_j[p] = row[j]
        if filled < k:
            filled += 1


def bootstrap_statistics(const double[::1] r, const double[::1] theta, const cnp.int64_t[:, :] idx,
                         Py_ssize_t k, double a, double b):
    cdef Py_ssize_t B = idx.shape[0], m = idx.shape[1]
    cdef Py_ssize_t i, j
    cdef double rk, th, lg, upper, lower, g, dsum, tnum, tden, gnum, gden
    if k < 1 or k > m:
        raise ValueError("k must be in [1, m]")
    d_out = np.empty(B, dtype=np.float64)
    t_out = np.empty(B, dtype=np.float64)
    tg_out = np.empty(B, dtype=np.float64)
    ok_out = np.empty(B, dtype=np.bool_)
    cdef double[::1] d_v = d_out, t_v = t_out, tg_v = tg_out
    cdef cnp.npy_bool[::1] ok_v = ok_out
    cdef double* top_r = <double*> malloc(k * sizeof(double))
    cdef cnp.int64_t* top_j = <cnp.int64_t*> malloc(k * sizeof(cnp.int64_t))
    if top_r == NULL or top_j == NULL:
        free(top_r)
        free(top_j)
        raise MemoryError()
    try:
        with nogil:
            for i in range(B):
                _select_top(r, idx[i], m, k, top_r, top_j)
                rk = top_r[k - 1]
                dsum = 0.0
                tnum = 0.0
                tden = 0.0
                gnum = 0.0
                gden = 0.0
                for j in range(k):
                    th = theta[top_j[j]]
                    lg = log(top_r[j] / rk)
                    if b > 0:
                        upper = th / b - 1.0
                        if upper < 0.0:
                            upper = 0.0
                    elif th > 0:
                        upper = INFINITY
                    else:
                        upper = 0.0
                    lower = 0.0
                    if a > 0:
                        lower = 1.0 - th / a
                        if lower < 0.0:
                            lower = 0.0
                    if lg > 0:
                        dsum += (1.0 + top_r[j] * (upper + lower) / rk) * lg
                    tnum += th * lg
                    tden += th
                    g = 1.0 - 2.0 * th if th < 0.5 else 3.0 - 2.0 * th
                    gnum += g * lg
                    gden += g
                d_v[i] = dsum / k
                tg_v[i] = gnum / gden
                if tden > 0:
                    t_v[i] = tnum / tden
                    ok_v[i] = True
                else:
                    t_v[i] = NAN
                    ok_v[i] = False
    finally:
        free(top_r)
        free(top_j)
    return d_out, t_out, tg_out, ok_out


def ks_scan(radii, Py_ssize_t k_min, Py_ssize_t k_max):
    cdef const double[::1] rv = np.ascontiguousarray(radii, dtype=np.float64)
    cdef Py_ssize_t n_k = k_max - k_min + 1, kk, i
    cdef double rk, h, alpha, fit, lo, hi, worst
    out = np.empty(n_k, dtype=np.float64)
    cdef double[::1] ov = out
    with nogil:
        for kk in range(k_min, k_max + 1):
            rk = rv[kk - 1]
            h = 0.0
            for i in range(kk):
                h += log(rv[i] / rk)
            h = h / kk
            if not h > 0:
                ov[kk - k_min] = 1.0
                continue
            alpha = 1.0 / h
            worst = 0.0
            for i in range(kk):
                fit = 1.0 - pow(rv[i] / rk, -alpha)
                lo = fabs(<double>(kk - i - 1) / kk - fit)
                hi = fabs(<double>(kk - i) / kk - fit)
                if lo > worst:
                    worst = lo
                if hi > worst:
                    worst = hi
            ov[kk - k_min] = worst
    return out
