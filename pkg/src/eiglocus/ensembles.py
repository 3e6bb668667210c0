"""Seeded random matrix ensembles used by the check, bench and acceptance runs."""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import ComplexMatrix, PrngState, prng_complex, substream
from .spectra import known_spectrum_matrix

KINDS = ("uniform-ginibre", "known-spectrum", "diag-dominant")


@dataclass(frozen=True)
class EnsembleConfig:
    kind: str
    n: int
    trials: int
    seed: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown ensemble {self.kind!r}; expected one of {KINDS}")
        if not 2 <= self.n <= 12:
            raise ValueError("ensemble order must be in 2..12")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


def uniform_ginibre(n: int, rng: PrngState) -> tuple[ComplexMatrix, PrngState]:
    """Entries with real and imaginary parts uniform on [-1, 1), drawn row-major."""
    rows = []
    for _ in range(n):
        row = []
        for _ in range(n):
            rng, v = prng_complex(rng)
            row.append(v)
        rows.append(row)
    return ComplexMatrix(rows), rng


def diag_dominant(n: int, rng: PrngState) -> tuple[ComplexMatrix, PrngState]:
    """Ginibre draw with each diagonal modulus pushed out by r_i + 1 along its phase."""
    A, rng = uniform_ginibre(n, rng)
    rows = [list(row) for row in A.rows]
    for i in range(n):
        a = rows[i][i]
        push = A.row_sums[i] + 1.0
        rows[i][i] = a + push * (a / abs(a)) if a != 0 else a + 1.0
    return ComplexMatrix(rows), rng


def known_spectrum(n: int, rng: PrngState) -> tuple[ComplexMatrix, PrngState]:
    eigs = []
    for _ in range(n):
        rng, v = prng_complex(rng)
        eigs.append(2.0 * v)
    return known_spectrum_matrix(eigs, rng)


_DRAW = {
    "uniform-ginibre": uniform_ginibre,
    "known-spectrum": known_spectrum,
    "diag-dominant": diag_dominant,
}


def draw(kind: str, n: int, seed: int, trial: int) -> ComplexMatrix:
    """Matrix for ``trial`` of an ensemble; each trial owns its own substream."""
    try:
        fn = _DRAW[kind]
    except KeyError:
        raise ValueError(f"unknown ensemble {kind!r}") from None
    A, _ = fn(n, substream(seed, trial))
    return A


def matrices(config: EnsembleConfig):
    for t in range(config.trials):
        yield t, draw(config.kind, config.n, config.seed, t)
