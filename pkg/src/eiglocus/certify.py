"""Nonsingularity certificates from the two exclusion-refined Brauer-type sets.

Each certificate checks every ordered pair (i, j), i != j.  A pair passes by
the *product* branch when the origin lies outside the Cassini oval, or by the
*exclusion* branch when the origin lies inside the pair's exclusion set.  The
matrix is certified when every pair passes, which is the statement that the
origin is not in the corresponding inclusion set.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .linalg import ComplexMatrix

COROLLARY1 = "corollary1"
COROLLARY2 = "corollary2"


@dataclass(frozen=True)
class PairWitness:
    pair: tuple[int, int]
    branch: str  # "product", "exclusion" or "none"
    s: int | None = None

    def as_dict(self) -> dict:
        d = {"pair": list(self.pair), "branch": self.branch}
        if self.s is not None:
            d["s"] = self.s
        return d


@dataclass(frozen=True)
class CertReport:
    certified: bool
    method: str
    witnesses: tuple[PairWitness, ...] = field(default_factory=tuple)
    failing_pair: tuple[int, int] | None = None

    def as_dict(self) -> dict:
        return {
            "certified": self.certified,
            "method": self.method,
            "witnesses": [w.as_dict() for w in self.witnesses],
            "failing_pair": list(self.failing_pair) if self.failing_pair else None,
        }


def _degenerate(A: ComplexMatrix, method: str) -> CertReport:
    # 1x1: no pairs exist, fall back to a_11 != 0
    ok = A.rows[0][0] != 0
    return CertReport(ok, method, (), None if ok else (0, 0))


def _run(A: ComplexMatrix, method: str, exclusion) -> CertReport:
    if A.n == 1:
        return _degenerate(A, method)
    m, r = A.moduli, A.row_sums
    witnesses = []
    failing = None
    for i in range(A.n):
        for j in range(A.n):
            if i == j:
                continue
            if m[i, i] * m[j, j] > r[i] * r[j]:
                witnesses.append(PairWitness((i, j), "product"))
                continue
            s = exclusion(A, i, j)
            if s is not None:
                witnesses.append(PairWitness((i, j), "exclusion", s))
            else:
                witnesses.append(PairWitness((i, j), "none"))
                if failing is None:
                    failing = (i, j)
    return CertReport(failing is None, method, tuple(witnesses), failing)


def _first_index_exclusion(A: ComplexMatrix, i: int, j: int) -> int | None:
    m, d = A.moduli, A.deleted_sums
    for s in range(A.n):
        if s != i and m[s, s] * (m[i, i] + d[i, s]) < (m[s, i] - d[s, i]) * m[i, s]:
            return s
    return None


def _pair_exclusion(A: ComplexMatrix, i: int, j: int) -> int | None:
    m, d = A.moduli, A.deleted_sums
    if (m[i, i] + d[i, j]) * (m[j, j] + d[j, i]) < m[i, j] * m[j, i]:
        return j
    return None


def cert_corollary1(A: ComplexMatrix) -> CertReport:
    """Certificate equivalent to the origin lying outside the first-index-exclusion set."""
    return _run(A, COROLLARY1, _first_index_exclusion)


def cert_corollary2(A: ComplexMatrix) -> CertReport:
    return _run(A, COROLLARY2, _pair_exclusion)
