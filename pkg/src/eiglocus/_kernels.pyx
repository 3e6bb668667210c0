# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled rasteriser for the five union sets.

Per cell the distances to the diagonal entries are computed once, then the
set's inequalities are tested in lexicographic pair order with early exit.
Same floating-point operations, in the same order, as the numpy fallback.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport hypot
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef enum:
    GERSH = 0
    BRAUER = 1
    OMEGA = 2
    PHI = 3
    THETA = 4


cdef inline bint _cell(int code, int n, double *d, const double[::1] r,
                       const double[:, ::1] dsum, const double[:, ::1] k_rhs,
                       const double[:, ::1] delta_rhs, const double[:, ::1] l_rhs,
                       const double[:, ::1] lam_rhs) noexcept nogil:
    cdef int i, j, s
    cdef bint excl
    if code == GERSH or n == 1:
        for i in range(n):
            if d[i] <= r[i]:
                return True
        return False
    if code == BRAUER:
        for i in range(n):
            for j in range(i + 1, n):
                if d[i] * d[j] <= k_rhs[i, j]:
                    return True
        return False
    if code == OMEGA:
        for i in range(n):
            if not d[i] <= r[i]:
                continue
            excl = False
            for j in range(n):
                if j != i and d[j] < delta_rhs[j, i]:
                    excl = True
                    break
            if not excl:
                return True
        return False
    if code == PHI:
        for i in range(n):
            excl = False
            for s in range(n):
                if s != i and d[s] * (d[i] + dsum[i, s]) < l_rhs[s, i]:
                    excl = True
                    break
            if excl:
                continue
            for j in range(n):
                if j != i and d[i] * d[j] <= k_rhs[i, j]:
                    return True
        return False
    # THETA
    for i in range(n):
        for j in range(n):
            if j != i and d[i] * d[j] <= k_rhs[i, j]:
                if not (d[i] + dsum[i, j]) * (d[j] + dsum[j, i]) < lam_rhs[i, j]:
                    return True
    return False


def rasterize_union(int code, xs, ys, dre, dim, r, dsum, k_rhs, delta_rhs, l_rhs, lam_rhs):
    if code < 0 or code > 4:
        raise ValueError(f"unknown kernel code {code}")
    cdef const double[::1] xv = np.ascontiguousarray(xs, dtype=np.float64)
    cdef const double[::1] yv = np.ascontiguousarray(ys, dtype=np.float64)
    cdef const double[::1] are = np.ascontiguousarray(dre, dtype=np.float64)
    cdef const double[::1] aim = np.ascontiguousarray(dim, dtype=np.float64)
    cdef const double[::1] rv = np.ascontiguousarray(r, dtype=np.float64)
    cdef const double[:, ::1] dv = np.ascontiguousarray(dsum, dtype=np.float64)
    cdef const double[:, ::1] kv = np.ascontiguousarray(k_rhs, dtype=np.float64)
    cdef const double[:, ::1] delv = np.ascontiguousarray(delta_rhs, dtype=np.float64)
    cdef const double[:, ::1] lv = np.ascontiguousarray(l_rhs, dtype=np.float64)
    cdef const double[:, ::1] lamv = np.ascontiguousarray(lam_rhs, dtype=np.float64)
    cdef Py_ssize_t w = xv.shape[0], h = yv.shape[0], row, col
    cdef int n = are.shape[0], k
    out = np.zeros((h, w), dtype=np.uint8)
    cdef unsigned char[:, ::1] ov = out
    cdef double *d = <double *> malloc(n * sizeof(double))
    cdef double x, y
    if d == NULL:
        raise MemoryError()
    try:
        with nogil:
            for row in range(h):
                y = yv[row]
                for col in range(w):
                    x = xv[col]
                    for k in range(n):
                        d[k] = hypot(x - are[k], y - aim[k])
                    ov[row, col] = _cell(code, n, d, rv, dv, kv, delv, lv, lamv)
    finally:
        free(d)
    return out.view(bool)
