"""Command-line interface.

Exit codes: 0 success, 1 a hard check failed, 2 usage or parse error,
3 I/O error, 4 spectrum oracle failure.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial

import numpy as np

from . import raster, verify
from .certify import cert_corollary1, cert_corollary2
from .ensembles import KINDS, EnsembleConfig, draw, matrices
from .linalg import MatrixFormatError, load_matrix
from .regions import UNION_TAGS
from .spectra import determinant

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO, EXIT_ORACLE = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load(path: str):
    try:
        return load_matrix(path)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc}") from None
    except MatrixFormatError as exc:
        raise CliError(EXIT_USAGE, f"{path}: {type(exc).__name__}: {exc}") from None


def _write(path: str, data: bytes) -> None:
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {path}: {exc}") from None


def _set_name(name: str) -> str:
    name = name.strip().lower()
    if name not in UNION_TAGS:
        raise CliError(EXIT_USAGE, f"unknown set {name!r}; expected one of {', '.join(UNION_TAGS)}")
    return name


def _box(args, A):
    if args.box:
        try:
            return raster.BoundingBox.parse(args.box)
        except ValueError as exc:
            raise CliError(EXIT_USAGE, f"bad --box: {exc}") from None
    return raster.auto_box(A)


def _oracle(A):
    try:
        return verify.oracle(A)
    except verify.OracleFailure as exc:
        raise CliError(EXIT_ORACLE, str(exc)) from None


def cmd_compute(args) -> int:
    A = _load(args.matrix)
    tag = _set_name(args.set)
    box = _box(args, A)
    grid = raster.rasterize(A, tag, box, args.grid, backend=args.backend)
    print(
        verify.canonical_json(
            {
                "set": tag,
                "grid": args.grid,
                "box": box.as_dict(),
                "bits": grid.count(),
                "area": raster.area(grid),
            }
        ),
        end="",
    )
    if args.out:
        _write(args.out, raster.emit_pbm(grid))
    return EXIT_OK


def cmd_plot(args) -> int:
    A = _load(args.matrix)
    layers = [_set_name(s) for s in args.layers.split(",") if s.strip()]
    fmt = args.format or ("ppm" if args.out.lower().endswith(".ppm") else "svg")
    box = _box(args, A)
    spec = _oracle(A)
    grids = [(raster.rasterize(A, t, box, args.grid, backend=args.backend), t) for t in layers]
    if grids:
        geometry = grids[0][0]
    else:
        geometry = raster.RasterGrid(box, args.grid, args.grid, np.zeros((args.grid, args.grid), dtype=bool))
    if fmt == "svg":
        data = raster.emit_svg(
            [(g, raster.LAYER_COLORS[t], t) for g, t in grids], spec.eigenvalues, geometry
        )
    elif fmt == "ppm":
        data = raster.emit_ppm([(g, raster.LAYER_COLORS[t]) for g, t in grids], spec.eigenvalues, geometry)
    else:
        raise CliError(EXIT_USAGE, f"unknown format {fmt!r}")
    _write(args.out, data)
    return EXIT_OK


def cmd_check(args) -> int:
    A = _load(args.matrix)
    if A.n > verify.CHECK_MAX_ORDER:
        raise CliError(EXIT_USAGE, f"check supports n <= {verify.CHECK_MAX_ORDER}")
    box = _box(args, A)
    try:
        report = verify.check_matrix(A, args.grid, box=box, timings=args.timings)
    except verify.OracleFailure as exc:
        raise CliError(EXIT_ORACLE, str(exc)) from None
    print(verify.canonical_json(report), end="")
    return EXIT_OK if report["ok"] else EXIT_FAIL


def _cert_reports(A, method: str) -> dict:
    out = {}
    if method in ("c1", "both"):
        out["corollary1"] = cert_corollary1(A).as_dict()
    if method in ("c2", "both"):
        out["corollary2"] = cert_corollary2(A).as_dict()
    return out


def cmd_cert(args) -> int:
    if args.matrix:
        A = _load(args.matrix)
        out = _cert_reports(A, args.method)
        out["determinant"] = verify.cplx(determinant(A))
        print(verify.canonical_json(out), end="")
        return EXIT_OK
    config = _ensemble(args)
    certified = {"corollary1": 0, "corollary2": 0}
    unsound = []
    nonzero_det = 0
    for t, A in matrices(config):
        reports = _cert_reports(A, args.method)
        det = determinant(A)
        nonzero_det += det != 0
        for name, rep in reports.items():
            if rep["certified"]:
                certified[name] += 1
                if det == 0:
                    unsound.append({"trial": t, "method": name})
    out = {
        "ensemble": vars(config),
        "certified": {k: v for k, v in certified.items() if k in _methods(args.method)},
        "nonzero_determinants": nonzero_det,
        "soundness_violations": unsound,
    }
    print(verify.canonical_json(out), end="")
    return EXIT_FAIL if unsound else EXIT_OK


def _methods(method: str) -> tuple[str, ...]:
    return {"c1": ("corollary1",), "c2": ("corollary2",), "both": ("corollary1", "corollary2")}[method]


def _ensemble(args) -> EnsembleConfig:
    if args.ensemble is None:
        raise CliError(EXIT_USAGE, "give --matrix or --ensemble")
    try:
        return EnsembleConfig(args.ensemble, args.n, args.trials, args.seed)
    except ValueError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None


def _bench_one(trial: int, config: EnsembleConfig, grid: int, backend):
    A = draw(config.kind, config.n, config.seed, trial)
    return verify.bench_trial(A, grid, backend=backend)


def cmd_bench(args) -> int:
    config = _ensemble(args)
    job = partial(_bench_one, config=config, grid=args.grid, backend=args.backend)
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            trials = list(pool.map(job, range(config.trials)))
    else:
        trials = [job(t) for t in range(config.trials)]
    out = {
        "config": vars(config),
        "grid": args.grid,
        "summary": verify.summarize(trials),
    }
    if args.per_trial:
        out["per_trial"] = trials
    print(verify.canonical_json(out), end="")
    return EXIT_OK


def _grid(text: str) -> int:
    v = int(text)
    if v < 2:
        raise argparse.ArgumentTypeError("grid must be >= 2")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eiglocus", description="Eigenvalue inclusion sets and certificates.")
    p.add_argument("--backend", choices=sorted(raster._backend.BACKENDS), default=None,
                   help="raster kernel (default: compiled if available)")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, matrix_required=True):
        sp.add_argument("--matrix", required=matrix_required, help="matrix JSON file")
        sp.add_argument("--grid", type=_grid, default=raster.DEFAULT_GRID)
        sp.add_argument("--box", help="re_min,re_max,im_min,im_max (default: padded Gershgorin box)")

    def ensemble(sp):
        sp.add_argument("--ensemble", choices=KINDS)
        sp.add_argument("--n", type=int, default=4)
        sp.add_argument("--trials", type=int, default=100)
        sp.add_argument("--seed", type=int, default=1)

    sp = sub.add_parser("compute", help="rasterize one set, print area as JSON")
    common(sp)
    sp.add_argument("--set", required=True)
    sp.add_argument("--out", help="also write the raw grid as PBM")
    sp.set_defaults(func=cmd_compute)

    sp = sub.add_parser("plot", help="draw layered sets with eigenvalue markers")
    common(sp)
    sp.add_argument("--layers", default="brauer,phi")
    sp.add_argument("--out", required=True)
    sp.add_argument("--format", choices=("svg", "ppm"))
    sp.set_defaults(func=cmd_plot)

    sp = sub.add_parser("check", help="verify eigenvalue memberships and the containment chain")
    common(sp)
    sp.add_argument("--timings", action="store_true", help="include wall-clock timings (not deterministic)")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("cert", help="nonsingularity certificates")
    sp.add_argument("--matrix")
    sp.add_argument("--method", choices=("c1", "c2", "both"), default="both")
    ensemble(sp)
    sp.set_defaults(func=cmd_cert)

    sp = sub.add_parser("bench", help="seeded ensemble statistics, incl. the phi-in-theta conjecture count")
    ensemble(sp)
    sp.add_argument("--grid", type=_grid, default=raster.DEFAULT_GRID)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--per-trial", action="store_true")
    sp.set_defaults(func=cmd_bench, ensemble="uniform-ginibre")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"eiglocus: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
