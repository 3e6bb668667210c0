"""Vectorised numpy rasteriser; used when the compiled kernel is unavailable.

Arithmetic mirrors the scalar predicates operation for operation so that both
backends and the pointwise path agree bit-for-bit.
"""

import numpy as np

GERSH, BRAUER, OMEGA, PHI, THETA = range(5)


def _distances(xs, ys, dre, dim):
    x = xs[None, :]
    y = ys[:, None]
    return [np.hypot(x - dre[k], y - dim[k]) for k in range(len(dre))]


def rasterize_union(code, xs, ys, dre, dim, r, dsum, k_rhs, delta_rhs, l_rhs, lam_rhs):
    n = len(dre)
    d = _distances(np.asarray(xs, dtype=np.float64), np.asarray(ys, dtype=np.float64), dre, dim)
    out = np.zeros((len(ys), len(xs)), dtype=bool)
    if code == GERSH or n == 1:
        for i in range(n):
            out |= d[i] <= r[i]
        return out
    if code == BRAUER:
        for i in range(n):
            for j in range(i + 1, n):
                out |= d[i] * d[j] <= k_rhs[i, j]
        return out
    if code == OMEGA:
        for i in range(n):
            excl = np.zeros_like(out)
            for j in range(n):
                if j != i:
                    excl |= d[j] < delta_rhs[j, i]
            out |= (d[i] <= r[i]) & ~excl
        return out
    if code == PHI:
        for i in range(n):
            excl = np.zeros_like(out)
            for s in range(n):
                if s != i:
                    excl |= d[s] * (d[i] + dsum[i, s]) < l_rhs[s, i]
            keep = ~excl
            for j in range(n):
                if j != i:
                    out |= (d[i] * d[j] <= k_rhs[i, j]) & keep
        return out
    if code == THETA:
        for i in range(n):
            for j in range(n):
                if j != i:
                    lam = (d[i] + dsum[i, j]) * (d[j] + dsum[j, i]) < lam_rhs[i, j]
                    out |= (d[i] * d[j] <= k_rhs[i, j]) & ~lam
        return out
    raise ValueError(f"unknown kernel code {code}")
