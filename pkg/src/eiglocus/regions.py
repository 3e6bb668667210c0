"""Point-membership predicates for the inclusion and exclusion sets.

Inclusion sets (disks, Cassini ovals) are closed and compared with ``<=``;
exclusion sets are open and compared with ``<``.  All comparisons are exact
floating-point comparisons.  Tolerance is applied only on the eigenvalue side,
see :func:`eigen_membership`.

Indices are 0-based.  Every predicate taking a ``trace`` argument records the
oval inequality it evaluates as a hashable key, which is how the oval-count
accounting is instrumented.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Iterator

from .linalg import ComplexMatrix, _check_index

UNION_TAGS = ("gersh", "brauer", "omega", "phi", "theta")
_ARITY = {
    "gersh": 0,
    "brauer": 0,
    "omega": 0,
    "phi": 0,
    "theta": 0,
    "gersh_disk": 1,
    "brauer_oval": 2,
    "excl_delta": 2,
    "excl_l": 2,
    "excl_lambda": 2,
    "phi_pair": 2,
    "theta_pair": 2,
}


@dataclass(frozen=True)
class RegionKind:
    """Which set a membership query or raster refers to.

    ``tag`` is one of the five union sets, or a single constituent:
    ``gersh_disk(i)``, ``brauer_oval(i, j)``, ``excl_delta(i, j)``,
    ``excl_l(s, i)``, ``excl_lambda(i, j)``, ``phi_pair(i, j)``,
    ``theta_pair(i, j)``.
    """

    tag: str
    indices: tuple[int, ...] = ()

    def __post_init__(self):
        if self.tag not in _ARITY:
            raise ValueError(f"unknown region tag {self.tag!r}")
        if len(self.indices) != _ARITY[self.tag]:
            raise ValueError(f"{self.tag} takes {_ARITY[self.tag]} indices, got {self.indices}")
        if len(self.indices) == 2 and self.indices[0] == self.indices[1]:
            raise ValueError(f"{self.tag} needs distinct indices, got {self.indices}")

    @classmethod
    def parse(cls, name: str) -> "RegionKind":
        """``"phi"`` or ``"brauer_oval:0,2"`` style names."""
        tag, _, rest = name.partition(":")
        indices = tuple(int(x) for x in rest.split(",")) if rest else ()
        return cls(tag.strip().lower(), indices)

    def validate(self, n: int) -> None:
        if len(self.indices) == 2 and n < 2:
            raise ValueError(f"{self.tag} is undefined for a 1x1 matrix")
        for i in self.indices:
            if not 0 <= i < n:
                raise IndexError(f"{self} index {i} out of range for order {n}")

    def __str__(self) -> str:
        if not self.indices:
            return self.tag
        return f"{self.tag}:{','.join(map(str, self.indices))}"


GERSH = RegionKind("gersh")
BRAUER = RegionKind("brauer")
OMEGA = RegionKind("omega")
PHI = RegionKind("phi")
THETA = RegionKind("theta")


def _pair(A: ComplexMatrix, i: int, j: int) -> None:
    _check_index(A, i)
    _check_index(A, j)
    if i == j:
        raise ValueError(f"pair predicates need distinct indices, got ({i}, {j})")


def _point_set(A: ComplexMatrix, z: complex) -> bool:
    # n == 1: every set degenerates to {a_11}
    return abs(z - A.rows[0][0]) <= 0.0


# -- single sets --------------------------------------------------------------

def gersh_disk_contains(A: ComplexMatrix, i: int, z: complex) -> bool:
    _check_index(A, i)
    return abs(z - A.rows[i][i]) <= A.row_sums[i]


def brauer_oval_contains(A: ComplexMatrix, i: int, j: int, z: complex, trace: set | None = None) -> bool:
    _pair(A, i, j)
    if trace is not None:
        trace.add(("K", min(i, j), max(i, j)))
    r = A.row_sums
    return abs(z - A.rows[i][i]) * abs(z - A.rows[j][j]) <= r[i] * r[j]


def melman_delta_contains(A: ComplexMatrix, i: int, j: int, z: complex) -> bool:
    """Open disk around ``a_jj`` of radius ``2|a_ji| - r_j`` (empty if that is <= 0)."""
    _pair(A, i, j)
    return bool(abs(z - A.rows[j][j]) < 2.0 * A.moduli[j, i] - A.row_sums[j])


def lsi_contains(A: ComplexMatrix, s: int, i: int, z: complex, trace: set | None = None) -> bool:
    _pair(A, s, i)
    if trace is not None:
        trace.add(("L", s, i))
    m, d = A.moduli, A.deleted_sums
    lhs = abs(z - A.rows[s][s]) * (abs(z - A.rows[i][i]) + d[i, s])
    return bool(lhs < (m[s, i] - d[s, i]) * m[i, s])


def lambda_contains(A: ComplexMatrix, i: int, j: int, z: complex, trace: set | None = None) -> bool:
    _pair(A, i, j)
    if trace is not None:
        trace.add(("Lambda", min(i, j), max(i, j)))
    m, d = A.moduli, A.deleted_sums
    lhs = (abs(z - A.rows[i][i]) + d[i, j]) * (abs(z - A.rows[j][j]) + d[j, i])
    return bool(lhs < m[i, j] * m[j, i])


def l_union_contains(A: ComplexMatrix, i: int, z: complex, trace: set | None = None) -> bool:
    """Union over ``s != i`` of the first-index exclusion sets."""
    return any(lsi_contains(A, s, i, z, trace) for s in range(A.n) if s != i)


def omega_disk_contains(A: ComplexMatrix, i: int, z: complex) -> bool:
    return gersh_disk_contains(A, i, z) and not any(
        melman_delta_contains(A, i, j, z) for j in range(A.n) if j != i
    )


def phi_pair_contains(A: ComplexMatrix, i: int, j: int, z: complex, trace: set | None = None) -> bool:
    return brauer_oval_contains(A, i, j, z, trace) and not l_union_contains(A, i, z, trace)


def theta_pair_contains(A: ComplexMatrix, i: int, j: int, z: complex, trace: set | None = None) -> bool:
    return brauer_oval_contains(A, i, j, z, trace) and not lambda_contains(A, i, j, z, trace)


# -- unions -------------------------------------------------------------------

def _ordered_pairs(n: int) -> Iterator[tuple[int, int]]:
    for i in range(n):
        for j in range(n):
            if i != j:
                yield i, j


def gersh_witness(A: ComplexMatrix, z: complex) -> int | None:
    for i in range(A.n):
        if gersh_disk_contains(A, i, z):
            return i
    return None


def brauer_witness(A: ComplexMatrix, z: complex, trace: set | None = None) -> tuple[int, int] | None:
    for i in range(A.n):
        for j in range(i + 1, A.n):
            if brauer_oval_contains(A, i, j, z, trace):
                return i, j
    return None


def omega_witness(A: ComplexMatrix, z: complex) -> int | None:
    for i in range(A.n):
        if omega_disk_contains(A, i, z):
            return i
    return None


def phi_witness(A: ComplexMatrix, z: complex, trace: set | None = None) -> tuple[int, int] | None:
    for i, j in _ordered_pairs(A.n):
        if phi_pair_contains(A, i, j, z, trace):
            return i, j
    return None


def theta_witness(A: ComplexMatrix, z: complex, trace: set | None = None) -> tuple[int, int] | None:
    for i, j in _ordered_pairs(A.n):
        if theta_pair_contains(A, i, j, z, trace):
            return i, j
    return None


def gersh_contains(A: ComplexMatrix, z: complex) -> bool:
    return gersh_witness(A, z) is not None


def brauer_contains(A: ComplexMatrix, z: complex, trace: set | None = None) -> bool:
    if A.n == 1:
        return _point_set(A, z)
    return brauer_witness(A, z, trace) is not None


def omega_contains(A: ComplexMatrix, z: complex) -> bool:
    if A.n == 1:
        return _point_set(A, z)
    return omega_witness(A, z) is not None


def phi_contains(A: ComplexMatrix, z: complex, trace: set | None = None) -> bool:
    if A.n == 1:
        return _point_set(A, z)
    return phi_witness(A, z, trace) is not None


def theta_contains(A: ComplexMatrix, z: complex, trace: set | None = None) -> bool:
    if A.n == 1:
        return _point_set(A, z)
    return theta_witness(A, z, trace) is not None


_UNION = {
    "gersh": gersh_contains,
    "brauer": brauer_contains,
    "omega": omega_contains,
    "phi": phi_contains,
    "theta": theta_contains,
}
_SINGLE = {
    "gersh_disk": gersh_disk_contains,
    "brauer_oval": brauer_oval_contains,
    "excl_delta": melman_delta_contains,
    "excl_l": lsi_contains,
    "excl_lambda": lambda_contains,
    "phi_pair": phi_pair_contains,
    "theta_pair": theta_pair_contains,
}


def region_contains(A: ComplexMatrix, kind: RegionKind | str, z: complex) -> bool:
    if isinstance(kind, str):
        kind = RegionKind.parse(kind)
    if kind.tag in _UNION:
        return _UNION[kind.tag](A, z)
    kind.validate(A.n)
    return _SINGLE[kind.tag](A, *kind.indices, z)


def oval_count(n: int, kind: RegionKind | str) -> int:
    """Number of Cassini ovals whose inequalities define the set."""
    tag = kind if isinstance(kind, str) else kind.tag
    if n < 2:
        raise ValueError("oval counts are defined for n >= 2")
    pairs = n * (n - 1) // 2
    counts = {"brauer": pairs, "phi": 3 * pairs, "theta": 2 * pairs}
    if tag not in counts:
        raise ValueError(f"no oval count for {tag!r}")
    return counts[tag]


# -- eigenvalue-side tolerance ---------------------------------------------------

DILATION_REL = 1e-8


def dilation_points(lam: complex) -> list[complex]:
    """``lam`` followed by the 8 points ``lam + rho*exp(i*pi*k/4)``."""
    rho = DILATION_REL * (1.0 + abs(lam))
    return [lam] + [lam + rho * cmath.exp(1j * math.pi * k / 4) for k in range(8)]


def candidate_points(A: ComplexMatrix, lam: complex) -> list[complex]:
    """Dilation points plus, for each diagonal entry, ``lam`` moved toward it by
    at most ``rho`` (landing on it when closer than ``rho``).

    The extra points reach disks and ovals that have collapsed to single points.
    """
    pts = dilation_points(lam)
    rho = DILATION_REL * (1.0 + abs(lam))
    for a in A.diagonal:
        gap = abs(a - lam)
        if gap <= rho:
            pts.append(a)
        else:
            pts.append(lam + (a - lam) * (rho / gap))
    return pts


def _closed_branches(A: ComplexMatrix, kind: RegionKind) -> list[list[Callable[[complex], bool]]]:
    """The set as a union of intersections of closed sets (as predicates)."""
    n = A.n
    tag = kind.tag
    if n == 1 and tag in UNION_TAGS:
        return [[lambda z: _point_set(A, z)]]

    def oval(i, j):
        return lambda z: brauer_oval_contains(A, i, j, z)

    def outside(pred, *idx):
        return lambda z: not pred(A, *idx, z)

    if tag == "gersh":
        return [[lambda z, i=i: gersh_disk_contains(A, i, z)] for i in range(n)]
    if tag == "gersh_disk":
        (i,) = kind.indices
        return [[lambda z: gersh_disk_contains(A, i, z)]]
    if tag == "brauer":
        return [[oval(i, j)] for i in range(n) for j in range(i + 1, n)]
    if tag == "brauer_oval":
        return [[oval(*kind.indices)]]
    if tag == "omega":
        return [
            [lambda z, i=i: gersh_disk_contains(A, i, z)]
            + [outside(melman_delta_contains, i, j) for j in range(n) if j != i]
            for i in range(n)
        ]
    if tag in ("phi", "phi_pair"):
        pairs = _ordered_pairs(n) if tag == "phi" else [kind.indices]
        return [
            [oval(i, j)] + [outside(lsi_contains, s, i) for s in range(n) if s != i]
            for i, j in pairs
        ]
    if tag in ("theta", "theta_pair"):
        pairs = _ordered_pairs(n) if tag == "theta" else [kind.indices]
        return [[oval(i, j), outside(lambda_contains, i, j)] for i, j in pairs]
    raise ValueError(f"{tag} is an exclusion set; eigenvalue membership is undefined for it")


def eigen_membership(A: ComplexMatrix, kind: RegionKind | str, lam: complex) -> str | None:
    """How a computed eigenvalue is found inside a closed inclusion set.

    Returns ``"exact"`` if the predicate holds at ``lam``, ``"dilated"`` if it
    holds at one of the :func:`candidate_points`, ``"per-constraint"`` if for
    some branch every closed constituent holds at one of those points (needed
    where the set is a curve, e.g. Phi and Theta for n=2), else ``None``.
    """
    if isinstance(kind, str):
        kind = RegionKind.parse(kind)
    kind.validate(A.n)
    branches = _closed_branches(A, kind)
    pts = candidate_points(A, complex(lam))
    if region_contains(A, kind, pts[0]):
        return "exact"
    if any(region_contains(A, kind, p) for p in pts[1:]):
        return "dilated"
    for branch in branches:
        if all(any(pred(p) for p in pts) for pred in branch):
            return "per-constraint"
    return None


def eigen_contains(A: ComplexMatrix, kind: RegionKind | str, lam: complex) -> bool:
    return eigen_membership(A, kind, lam) is not None
