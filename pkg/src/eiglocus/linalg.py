"""Complex matrices, off-diagonal row sums, the JSON matrix format and splitmix64."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

MASK64 = (1 << 64) - 1
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class MatrixFormatError(ValueError):
    """Base class for rejected matrix files."""


class MalformedMatrixError(MatrixFormatError):
    """The text is not valid JSON or lacks the expected structure."""


class MatrixShapeError(MatrixFormatError):
    """Row/column counts disagree with ``n`` or the matrix is not square."""


class NonFiniteEntryError(MatrixFormatError):
    """An entry is NaN or infinite."""


class ComplexMatrix:
    """Immutable dense n x n complex matrix with cached off-diagonal row sums.

    ``rows`` holds Python ``complex`` values so that moduli are taken with
    ``abs(complex)`` (libm ``hypot``), the same primitive the vectorised
    paths use through ``np.hypot``.
    """

    def __init__(self, entries: Iterable[Iterable[complex]]):
        rows = tuple(tuple(complex(v) for v in row) for row in entries)
        n = len(rows)
        if n < 1:
            raise MatrixShapeError("matrix order must be at least 1")
        for k, row in enumerate(rows):
            if len(row) != n:
                raise MatrixShapeError(f"row {k} has {len(row)} entries, expected {n}")
            for v in row:
                if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                    raise NonFiniteEntryError(f"non-finite entry {v!r} in row {k}")
        self.n = n
        self.rows = rows
        self.row_sums = tuple(_row_sum(rows[i], i) for i in range(n))

    @classmethod
    def from_array(cls, a) -> "ComplexMatrix":
        a = np.asarray(a, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise MatrixShapeError(f"expected a square 2-d array, got shape {a.shape}")
        return cls(a.tolist())

    def __getitem__(self, ij: tuple[int, int]) -> complex:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ComplexMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"ComplexMatrix(n={self.n})"

    @cached_property
    def array(self) -> np.ndarray:
        a = np.array(self.rows, dtype=np.complex128)
        a.setflags(write=False)
        return a

    @cached_property
    def diagonal(self) -> tuple[complex, ...]:
        return tuple(self.rows[i][i] for i in range(self.n))

    @cached_property
    def moduli(self) -> np.ndarray:
        """Entrywise moduli ``|a_ij|``, taken with the same ``abs`` as the row sums."""
        m = np.array([[abs(v) for v in row] for row in self.rows], dtype=np.float64)
        m.setflags(write=False)
        return m

    @cached_property
    def deleted_sums(self) -> np.ndarray:
        """``D[t, k] = r_t - |a_tk|``; the diagonal is undefined and holds NaN."""
        d = np.array(
            [[self.row_sums[t] - abs(v) for v in row] for t, row in enumerate(self.rows)],
            dtype=np.float64,
        )
        np.fill_diagonal(d, np.nan)
        d.setflags(write=False)
        return d

    def max_modulus(self) -> float:
        return float(self.moduli.max())


def _row_sum(row: Sequence[complex], i: int) -> float:
    total = 0.0
    for k, v in enumerate(row):
        if k != i:
            total += abs(v)
    return total


def _check_index(A: ComplexMatrix, i: int, name: str = "index") -> None:
    if not (0 <= i < A.n):
        raise IndexError(f"{name} {i} out of range for order {A.n}")


def row_sum(A: ComplexMatrix, i: int) -> float:
    """Sum of ``|a_ik|`` over ``k != i``, accumulated in ascending ``k``."""
    _check_index(A, i)
    return _row_sum(A.rows[i], i)


def deleted_row_sum(A: ComplexMatrix, t: int, k: int) -> float:
    """Row sum of row ``t`` with the entry in column ``k`` left out."""
    _check_index(A, t, "row")
    _check_index(A, k, "column")
    if t == k:
        raise ValueError("deleted row sum needs distinct row and column indices")
    return A.row_sums[t] - abs(A.rows[t][k])


# -- JSON matrix format -------------------------------------------------------

def _reject_constant(name: str):
    raise NonFiniteEntryError(f"non-finite literal {name} in matrix file")


def parse_matrix(text: bytes | str) -> ComplexMatrix:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedMatrixError(f"matrix file is not UTF-8: {exc}") from None
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise MalformedMatrixError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or "n" not in doc or "rows" not in doc:
        raise MalformedMatrixError('expected an object with keys "n" and "rows"')
    n, rows = doc["n"], doc["rows"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise MalformedMatrixError(f'"n" must be a positive integer, got {n!r}')
    if not isinstance(rows, list) or len(rows) != n:
        raise MatrixShapeError(f"expected {n} rows")
    entries = []
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise MatrixShapeError(f"row {r} must hold {n} entries")
        out = []
        for c, pair in enumerate(row):
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)
            ):
                raise MalformedMatrixError(f"entry ({r},{c}) must be a [re, im] number pair")
            re, im = float(pair[0]), float(pair[1])
            if not (math.isfinite(re) and math.isfinite(im)):
                raise NonFiniteEntryError(f"entry ({r},{c}) is not finite")
            out.append(complex(re, im))
        entries.append(out)
    return ComplexMatrix(entries)


def serialize_matrix(A: ComplexMatrix) -> str:
    """Inverse of :func:`parse_matrix`; floats use the shortest round-trip repr."""
    doc = {"n": A.n, "rows": [[[v.real, v.imag] for v in row] for row in A.rows]}
    return json.dumps(doc, separators=(",", ":"), allow_nan=False)


def load_matrix(path) -> ComplexMatrix:
    with open(path, "rb") as fh:
        return parse_matrix(fh.read())


# -- splitmix64 ---------------------------------------------------------------

@dataclass(frozen=True)
class PrngState:
    state: int

    def __post_init__(self):
        object.__setattr__(self, "state", self.state & MASK64)


def prng_next(s: PrngState) -> tuple[PrngState, int]:
    state = (s.state + _GOLDEN_GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return PrngState(state), z ^ (z >> 31)


def prng_uniform(s: PrngState) -> tuple[PrngState, float]:
    """Draw a real in [-1, 1) from the top 53 bits of the next output."""
    s, x = prng_next(s)
    return s, (x >> 11) * 2.0**-53 * 2.0 - 1.0


def prng_complex(s: PrngState) -> tuple[PrngState, complex]:
    s, re = prng_uniform(s)
    s, im = prng_uniform(s)
    return s, complex(re, im)


def substream(seed: int, index: int) -> PrngState:
    """Independent stream for trial ``index``: splitmix64 mix of ``seed ^ index``."""
    _, mixed = prng_next(PrngState(seed ^ index))
    return PrngState(mixed)
