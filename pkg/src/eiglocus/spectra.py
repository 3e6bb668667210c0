"""Independent eigenvalue oracle for small matrices.

Eigenvalues come from the characteristic polynomial (Faddeev-LeVerrier)
followed by Durand-Kerner simultaneous iteration.  Nothing here touches the
region predicates, so the oracle can be used to check them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .linalg import ComplexMatrix, PrngState, prng_complex

ORACLE_MAX_ORDER = 16
DK_MAX_ITER = 1000
DK_STEP_TOL = 1e-13
RESIDUAL_TOL = 1e-10
CLUSTER_RESIDUAL_TOL = 1e-6
CLUSTER_DIST = 1e-4
# relative thresholds tried, smallest first, when looking for multiple roots
CLUSTER_SCALES = (1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 0.3)
MULTIPLICITY_TOL = 1e-13


class OracleLimitError(ValueError):
    pass


class IllConditionedError(RuntimeError):
    pass


@dataclass(frozen=True)
class CharPoly:
    """Monic polynomial, coefficients in descending powers (``coefficients[0] == 1``)."""

    coefficients: tuple[complex, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, z: complex) -> complex:
        acc = 0j
        for c in self.coefficients:
            acc = acc * z + c
        return acc

    def eval_with_derivative(self, z: complex) -> tuple[complex, complex]:
        p, dp = 0j, 0j
        for c in self.coefficients:
            dp = dp * z + p
            p = p * z + c
        return p, dp


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: tuple[complex, ...]
    residuals: tuple[float, ...]
    converged: bool
    iterations: int = 0


def char_poly(A: ComplexMatrix) -> CharPoly:
    """Coefficients of det(zI - A) by the Faddeev-LeVerrier recursion."""
    n = A.n
    if n > ORACLE_MAX_ORDER:
        raise OracleLimitError(f"oracle limit: order {n} exceeds {ORACLE_MAX_ORDER}")
    a = A.array
    eye = np.eye(n, dtype=np.complex128)
    coef = [1 + 0j]
    m = np.zeros((n, n), dtype=np.complex128)
    for k in range(1, n + 1):
        m = a @ m + coef[-1] * eye
        coef.append(complex(-np.trace(a @ m) / k))
    return CharPoly(tuple(coef))


def _clustered(z: Sequence[complex]) -> list[bool]:
    flags = [False] * len(z)
    for i in range(len(z)):
        for j in range(i + 1, len(z)):
            if abs(z[i] - z[j]) < CLUSTER_DIST:
                flags[i] = flags[j] = True
    return flags


def taylor_coefficients(coefficients: Sequence[complex], c: complex) -> list[complex]:
    """Coefficients ``t_k`` of ``p(c + h) = sum t_k h^k`` by repeated synthetic division."""
    work = list(coefficients)
    n = len(work) - 1
    out = []
    for k in range(n + 1):
        for i in range(1, n + 1 - k):
            work[i] = work[i] + c * work[i - 1]
        out.append(work[n - k])
    return out


def _components(z: Sequence[complex], idx: list[int], tau_rel: float) -> list[list[int]]:
    seen, comps = set(), []
    for start in idx:
        if start in seen:
            continue
        comp, stack = [], [start]
        seen.add(start)
        while stack:
            a = stack.pop()
            comp.append(a)
            for b in idx:
                if b not in seen and abs(z[a] - z[b]) < tau_rel * (1 + abs(z[a])):
                    seen.add(b)
                    stack.append(b)
        comps.append(sorted(comp))
    return comps


def _derivative(coefficients: Sequence[complex]) -> list[complex]:
    n = len(coefficients) - 1
    return [c * (n - k) for k, c in enumerate(coefficients[:-1])]


def _newton(poly: CharPoly, z: complex, steps: int = 60) -> complex:
    for _ in range(steps):
        val, der = poly.eval_with_derivative(z)
        if der == 0:
            break
        step = val / der
        z -= step
        if abs(step) <= 1e-16 * (1 + abs(z)):
            break
    return z


def refine_multiple_roots(p: CharPoly, z: list[complex]) -> list[complex]:
    """Replace clusters that approximate one multiple root by that root.

    Near an m-fold root the iteration only resolves ~eps**(1/m).  The
    (m-1)-th derivative has a simple root there, so Newton on it from the
    cluster centroid recovers the root to ~eps.  The cluster is accepted only
    if the Taylor coefficients t_0..t_{m-1} of p at the refined point vanish
    to rounding level, relative to the same expansion of |p| at |c|.  Larger
    clusters validated at a coarser scale supersede smaller ones.
    """
    z = list(z)
    coef = p.coefficients
    abs_coef = [abs(c) for c in coef]
    everything = list(range(len(z)))
    for tau in CLUSTER_SCALES:
        for comp in _components(z, everything, tau):
            m = len(comp)
            if m < 2:
                continue
            q = list(coef)
            for _ in range(m - 1):
                q = _derivative(q)
            lead = q[0]
            c = _newton(CharPoly(tuple(v / lead for v in q)), sum(z[k] for k in comp) / m)
            t = taylor_coefficients(coef, c)
            scale = taylor_coefficients(abs_coef, abs(c))
            if all(abs(t[k]) <= MULTIPLICITY_TOL * scale[k].real for k in range(m)):
                for k in comp:
                    z[k] = c
    return z


def roots(p: CharPoly) -> SpectrumResult:
    n = p.degree
    if n < 1:
        raise ValueError("polynomial degree must be at least 1")
    seed = 0.4 + 0.9j
    z = [seed**k for k in range(n)]
    it = 0
    for it in range(1, DK_MAX_ITER + 1):
        step = 0.0
        new = list(z)
        for i in range(n):
            denom = 1 + 0j
            for j in range(n):
                if j != i:
                    denom *= new[i] - new[j] if j < i else z[i] - z[j]
            if denom == 0:
                denom = 1e-300
            delta = p(z[i]) / denom
            new[i] = z[i] - delta
            step = max(step, abs(delta))
        z = new
        if step < DK_STEP_TOL * (1 + max(abs(v) for v in z)):
            break

    # one Newton polish per root, kept only if it lowers |p|
    for i in range(n):
        val, der = p.eval_with_derivative(z[i])
        if der != 0:
            cand = z[i] - val / der
            if abs(p(cand)) < abs(val):
                z[i] = cand
    z = refine_multiple_roots(p, z)

    residuals = []
    for v in z:
        val, der = p.eval_with_derivative(v)
        residuals.append(abs(val) / max(1.0, abs(der)))
    clustered = _clustered(z)
    converged = all(
        r < (CLUSTER_RESIDUAL_TOL if c else RESIDUAL_TOL) for r, c in zip(residuals, clustered)
    )
    order = sorted(range(n), key=lambda k: (z[k].real, z[k].imag))
    return SpectrumResult(
        tuple(z[k] for k in order),
        tuple(residuals[k] for k in order),
        converged,
        it,
    )


def eigenvalues(A: ComplexMatrix) -> SpectrumResult:
    return roots(char_poly(A))


def spectrum_distance(found: Sequence[complex], wanted: Sequence[complex]) -> float:
    """Largest distance under the best one-to-one matching of the two lists."""
    if len(found) != len(wanted):
        raise ValueError("spectra of different sizes")
    f = np.asarray(found, dtype=np.complex128)
    w = np.asarray(wanted, dtype=np.complex128)
    cost = np.abs(f[:, None] - w[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


# -- LU with partial pivoting ---------------------------------------------------

def lu_factor(a) -> tuple[np.ndarray, np.ndarray, int]:
    """In-place style LU of a copy of ``a``: returns (lu, perm, sign).

    A column with no nonzero candidate is left alone (zero pivot).
    """
    lu = np.array(a, dtype=np.complex128, copy=True)
    n = lu.shape[0]
    perm = np.arange(n)
    sign = 1
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if lu[p, k] == 0:
            continue
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            sign = -sign
        lu[k + 1 :, k] /= lu[k, k]
        lu[k + 1 :, k + 1 :] -= np.outer(lu[k + 1 :, k], lu[k, k + 1 :])
    return lu, perm, sign


def lu_solve(lu: np.ndarray, perm: np.ndarray, b) -> np.ndarray:
    n = lu.shape[0]
    x = np.array(b, dtype=np.complex128)[perm]
    for k in range(n):
        x[k + 1 :] -= np.outer(lu[k + 1 :, k], x[k]) if x.ndim > 1 else lu[k + 1 :, k] * x[k]
    for k in range(n - 1, -1, -1):
        x[k] /= lu[k, k]
        x[:k] -= np.outer(lu[:k, k], x[k]) if x.ndim > 1 else lu[:k, k] * x[k]
    return x


def determinant(A: ComplexMatrix) -> complex:
    lu, _, sign = lu_factor(A.array)
    det = complex(sign)
    for k in range(A.n):
        det *= complex(lu[k, k])
    return det


def known_spectrum_matrix(
    eigs: Sequence[complex], rng: PrngState, max_draws: int = 100
) -> tuple[ComplexMatrix, PrngState]:
    """A = P diag(eigs) P^-1 with P = I + R/2 drawn from ``rng``."""
    k = len(eigs)
    if not 1 <= k <= ORACLE_MAX_ORDER:
        raise OracleLimitError(f"spectrum size {k} outside 1..{ORACLE_MAX_ORDER}")
    eigs = [complex(e) for e in eigs]
    if k == 1:
        return ComplexMatrix([[eigs[0]]]), rng
    d = np.diag(np.asarray(eigs, dtype=np.complex128))
    for _ in range(max_draws):
        r = np.empty((k, k), dtype=np.complex128)
        for i in range(k):
            for j in range(k):
                rng, r[i, j] = prng_complex(rng)
        p = np.eye(k) + 0.5 * r
        lu, perm, _ = lu_factor(p)
        if np.min(np.abs(np.diag(lu))) <= 1e-3:
            continue
        p_inv = lu_solve(lu, perm, np.eye(k, dtype=np.complex128))
        A = ComplexMatrix.from_array(p @ d @ p_inv)
        spec = eigenvalues(A)
        if spec.converged and spectrum_distance(spec.eigenvalues, eigs) <= 1e-6:
            return A, rng
    raise IllConditionedError(f"{max_draws} consecutive draws failed to give a well-conditioned P")
