"""Cross-checks of the inclusion sets against the spectrum oracle.

These build the JSON-ready dictionaries behind ``eiglocus check`` and
``eiglocus bench``.
"""

from __future__ import annotations

import hashlib
import json
import time
from statistics import fmean

from . import raster
from .certify import cert_corollary1, cert_corollary2
from .linalg import ComplexMatrix, serialize_matrix
from .regions import UNION_TAGS, eigen_membership, oval_count
from .spectra import SpectrumResult, determinant, eigenvalues

CHECK_MAX_ORDER = 12

# (inner, outer) pairs of the containment chain
CHAIN = (("phi", "brauer"), ("theta", "brauer"), ("brauer", "gersh"), ("omega", "gersh"))


class OracleFailure(RuntimeError):
    pass


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def digest(A: ComplexMatrix) -> str:
    return hashlib.sha256(serialize_matrix(A).encode("utf-8")).hexdigest()


def cplx(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def oracle(A: ComplexMatrix) -> SpectrumResult:
    spec = eigenvalues(A)
    if not spec.converged:
        raise OracleFailure(f"oracle failed: residuals {spec.residuals}")
    return spec


def membership_table(A: ComplexMatrix, spec: SpectrumResult) -> list[dict]:
    rows = []
    for lam, res in zip(spec.eigenvalues, spec.residuals):
        rows.append(
            {
                "eigenvalue": cplx(lam),
                "residual": res,
                "sets": {tag: eigen_membership(A, tag, lam) for tag in UNION_TAGS},
            }
        )
    return rows


def rasterize_all(A: ComplexMatrix, box, grid: int, backend=None) -> dict[str, raster.RasterGrid]:
    return {tag: raster.rasterize(A, tag, box, grid, backend=backend) for tag in UNION_TAGS}


def chain_report(grids: dict[str, raster.RasterGrid]) -> dict:
    out = {}
    for inner, outer in CHAIN:
        bad = raster.subset_violations(grids[inner], grids[outer])
        out[f"{inner}<={outer}"] = {"holds": bad == 0, "violations": bad}
    return out


def conjecture_count(grids: dict[str, raster.RasterGrid]) -> int:
    """Cells in phi but not theta; expected 0, never treated as a failure."""
    return raster.subset_violations(grids["phi"], grids["theta"])


def check_matrix(A: ComplexMatrix, grid: int = raster.DEFAULT_GRID, box=None, timings: bool = False) -> dict:
    if A.n > CHECK_MAX_ORDER:
        raise ValueError(f"check supports n <= {CHECK_MAX_ORDER}, got {A.n}")
    clock = {}
    t0 = time.perf_counter()
    spec = oracle(A)
    clock["oracle"] = time.perf_counter() - t0

    table = membership_table(A, spec)
    memberships_ok = all(v is not None for row in table for v in row["sets"].values())

    box = box or raster.auto_box(A)
    t0 = time.perf_counter()
    grids = rasterize_all(A, box, grid)
    clock["raster"] = time.perf_counter() - t0
    chain = chain_report(grids)
    violations = conjecture_count(grids)

    report = {
        "matrix": {"n": A.n, "sha256": digest(A)},
        "grid": grid,
        "box": box.as_dict(),
        "eigenvalues": table,
        "memberships_ok": memberships_ok,
        "chain": chain,
        "chain_ok": all(v["holds"] for v in chain.values()),
        "areas": {tag: raster.area(g) for tag, g in grids.items()},
        "conjecture": {"phi_minus_theta_cells": violations},
        "oval_counts": (
            {tag: oval_count(A.n, tag) for tag in ("brauer", "phi", "theta")} if A.n >= 2 else None
        ),
    }
    report["ok"] = report["memberships_ok"] and report["chain_ok"]
    if violations:
        report["findings"] = [f"{violations} grid cells lie in phi but not in theta"]
    if timings:
        report["timings"] = clock
    return report


def _ratio(a: float, b: float) -> float | None:
    return a / b if b > 0 else None


def bench_trial(A: ComplexMatrix, grid: int, backend=None) -> dict:
    box = raster.auto_box(A)
    grids = rasterize_all(A, box, grid, backend=backend)
    areas = {tag: raster.area(g) for tag, g in grids.items()}
    c1, c2 = cert_corollary1(A), cert_corollary2(A)
    spec = eigenvalues(A)
    trial = {
        "sha256": digest(A),
        "areas": areas,
        "bits": {tag: g.count() for tag, g in grids.items()},
        "ratios": {
            "phi/brauer": _ratio(areas["phi"], areas["brauer"]),
            "theta/brauer": _ratio(areas["theta"], areas["brauer"]),
            "brauer/gersh": _ratio(areas["brauer"], areas["gersh"]),
        },
        "chain_ok": all(v["holds"] for v in chain_report(grids).values()),
        "conjecture_violations": conjecture_count(grids),
        "cert": {"corollary1": c1.certified, "corollary2": c2.certified},
        "oracle_converged": spec.converged,
    }
    if spec.converged:
        table = membership_table(A, spec)
        trial["memberships_ok"] = all(v is not None for row in table for v in row["sets"].values())
        if c1.certified or c2.certified:
            trial["determinant_nonzero"] = determinant(A) != 0
    return trial


def summarize(trials: list[dict]) -> dict:
    ok = [t for t in trials if t["oracle_converged"]]
    n = len(trials)

    def mean_ratio(key):
        vals = [t["ratios"][key] for t in ok if t["ratios"][key] is not None]
        return fmean(vals) if vals else None

    findings = [
        f"trial {k}: {t['conjecture_violations']} cells in phi but not theta"
        for k, t in enumerate(trials)
        if t["conjecture_violations"]
    ]
    return {
        "trials": n,
        "oracle_failures": n - len(ok),
        "mean_ratios": {k: mean_ratio(k) for k in ("phi/brauer", "theta/brauer", "brauer/gersh")},
        "max_ratios": {
            k: max((t["ratios"][k] for t in ok if t["ratios"][k] is not None), default=None)
            for k in ("phi/brauer", "theta/brauer", "brauer/gersh")
        },
        "conjecture_violations": sum(t["conjecture_violations"] for t in ok),
        "chain_failures": sum(not t["chain_ok"] for t in ok),
        "membership_failures": sum(not t.get("memberships_ok", True) for t in ok),
        "cert_rates": {
            m: (sum(t["cert"][m] for t in ok) / len(ok) if ok else None)
            for m in ("corollary1", "corollary2")
        },
        "findings": findings,
    }
