"""Compare the compiled and numpy raster kernels.

    python benchmarks/bench_kernels.py [--grid 512] [--repeat 5]

Prints the best-of-``repeat`` time per set and backend, and checks that both
backends produce identical bits.
"""

import argparse
import time

from eiglocus import load_fixture
from eiglocus import _backend
from eiglocus.ensembles import draw
from eiglocus.raster import auto_box, rasterize
from eiglocus.regions import UNION_TAGS


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--grid", type=int, default=512)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    cases = {"example31": load_fixture("example31.json"), "ginibre n=8": draw("uniform-ginibre", 8, 1, 0)}
    backends = sorted(_backend.BACKENDS)
    if "compiled" not in backends:
        print("compiled extension not available; timing the numpy kernel only")
    print(f"grid {args.grid}x{args.grid}, best of {args.repeat}")
    print(f"{'matrix':<14}{'set':<8}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for label, A in cases.items():
        box = auto_box(A)
        for tag in UNION_TAGS:
            times, grids = {}, {}
            for b in backends:
                times[b], grids[b] = best_of(lambda: rasterize(A, tag, box, args.grid, backend=b), args.repeat)
            if len(grids) == 2:
                assert grids["compiled"] == grids["python"], (label, tag)
            speed = f"{times['python'] / times['compiled']:.1f}x" if "compiled" in times else "-"
            print(f"{label:<14}{tag:<8}" + "".join(f"{times[b]:>11.4f}s" for b in backends) + f"{speed:>10}")


if __name__ == "__main__":
    main()
