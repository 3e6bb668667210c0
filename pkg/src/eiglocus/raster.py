"""Membership grids over a box in the complex plane, areas, and PPM/SVG output.

Cell (r, c) is sampled at its center; row 0 is the top edge (``im_max``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _backend
from .linalg import ComplexMatrix
from .regions import RegionKind

KERNEL_CODES = {"gersh": 0, "brauer": 1, "omega": 2, "phi": 3, "theta": 4}

LAYER_COLORS = {
    "gersh": "#DDDDDD",
    "brauer": "#AACCEE",
    "omega": "#88BB88",
    "phi": "#3355AA",
    "theta": "#AA5533",
}
MARKER_COLOR = "#000000"
SVG_LAYER_OPACITY = "0.85"
DEFAULT_GRID = 512


class GeometryMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class BoundingBox:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError(f"empty bounding box {self}")

    @classmethod
    def parse(cls, text: str) -> "BoundingBox":
        parts = [float(x) for x in text.split(",")]
        if len(parts) != 4:
            raise ValueError("box needs four comma-separated numbers re_min,re_max,im_min,im_max")
        return cls(*parts)

    def as_dict(self) -> dict:
        return {"re_min": self.re_min, "re_max": self.re_max, "im_min": self.im_min, "im_max": self.im_max}


@dataclass(frozen=True, eq=False)
class RasterGrid:
    box: BoundingBox
    width: int
    height: int
    bits: np.ndarray  # (height, width) bool, row 0 at im_max

    def __post_init__(self):
        if self.bits.shape != (self.height, self.width):
            raise ValueError(f"bits shape {self.bits.shape} != ({self.height}, {self.width})")
        self.bits.setflags(write=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RasterGrid):
            return NotImplemented
        return same_geometry(self, other) and np.array_equal(self.bits, other.bits)

    @property
    def cell_width(self) -> float:
        return (self.box.re_max - self.box.re_min) / self.width

    @property
    def cell_height(self) -> float:
        return (self.box.im_max - self.box.im_min) / self.height

    def count(self) -> int:
        return int(np.count_nonzero(self.bits))

    def cell_of(self, z: complex) -> tuple[int, int] | None:
        """Row/column of the cell containing ``z``, or None if outside the box."""
        b = self.box
        c = int(np.floor((z.real - b.re_min) / self.cell_width))
        r = int(np.floor((b.im_max - z.imag) / self.cell_height))
        if 0 <= r < self.height and 0 <= c < self.width:
            return r, c
        return None


def same_geometry(a: RasterGrid, b: RasterGrid) -> bool:
    return a.box == b.box and a.width == b.width and a.height == b.height


def cell_centers(box: BoundingBox, width: int, height: int) -> tuple[np.ndarray, np.ndarray]:
    xs = box.re_min + (np.arange(width) + 0.5) * ((box.re_max - box.re_min) / width)
    ys = box.im_max - (np.arange(height) + 0.5) * ((box.im_max - box.im_min) / height)
    return xs, ys


def auto_box(A: ComplexMatrix, pad: float = 0.05) -> BoundingBox:
    """Bounding box of all Gershgorin disks, padded on each edge by ``pad`` of the longer side."""
    lo_re = min(a.real - r for a, r in zip(A.diagonal, A.row_sums))
    hi_re = max(a.real + r for a, r in zip(A.diagonal, A.row_sums))
    lo_im = min(a.imag - r for a, r in zip(A.diagonal, A.row_sums))
    hi_im = max(a.imag + r for a, r in zip(A.diagonal, A.row_sums))
    side = max(hi_re - lo_re, hi_im - lo_im)
    margin = pad * side if side > 0 else 0.5
    return BoundingBox(lo_re - margin, hi_re + margin, lo_im - margin, hi_im + margin)


def kernel_tables(A: ComplexMatrix) -> dict[str, np.ndarray]:
    """Right-hand sides of every inequality, computed as the scalar predicates do."""
    m = A.moduli
    dsum = A.deleted_sums
    r = np.asarray(A.row_sums, dtype=np.float64)
    diag = np.asarray(A.diagonal, dtype=np.complex128)
    return {
        "dre": diag.real.copy(),
        "dim": diag.imag.copy(),
        "r": r,
        "dsum": np.nan_to_num(dsum, nan=0.0),
        "k_rhs": r[:, None] * r[None, :],
        "delta_rhs": 2.0 * m - r[:, None],
        "l_rhs": (m - dsum) * m.T,
        "lam_rhs": m * m.T,
    }


def _rasterize_single(A: ComplexMatrix, kind: RegionKind, xs, ys) -> np.ndarray:
    t = kernel_tables(A)
    x = xs[None, :]
    y = ys[:, None]

    def dist(k):
        return np.hypot(x - t["dre"][k], y - t["dim"][k])

    tag, idx = kind.tag, kind.indices
    if tag == "gersh_disk":
        (i,) = idx
        return dist(i) <= t["r"][i]
    i, j = idx
    di, dj = dist(i), dist(j)
    if tag == "brauer_oval":
        return di * dj <= t["k_rhs"][i, j]
    if tag == "excl_delta":
        return dj < t["delta_rhs"][j, i]
    if tag == "excl_l":
        s = i
        return di * (dj + t["dsum"][j, s]) < t["l_rhs"][s, j]
    if tag == "excl_lambda":
        return (di + t["dsum"][i, j]) * (dj + t["dsum"][j, i]) < t["lam_rhs"][i, j]
    oval = di * dj <= t["k_rhs"][i, j]
    if tag == "phi_pair":
        excl = np.zeros_like(oval)
        for s in range(A.n):
            if s != i:
                excl |= dist(s) * (di + t["dsum"][i, s]) < t["l_rhs"][s, i]
        return oval & ~excl
    if tag == "theta_pair":
        return oval & ~((di + t["dsum"][i, j]) * (dj + t["dsum"][j, i]) < t["lam_rhs"][i, j])
    raise ValueError(f"cannot rasterize {kind}")


def rasterize(
    A: ComplexMatrix,
    kind: RegionKind | str,
    box: BoundingBox,
    width: int = DEFAULT_GRID,
    height: int | None = None,
    backend: str | None = None,
) -> RasterGrid:
    if isinstance(kind, str):
        kind = RegionKind.parse(kind)
    height = width if height is None else height
    if width < 2 or height < 2:
        raise ValueError("grid must be at least 2x2")
    kind.validate(A.n)
    xs, ys = cell_centers(box, width, height)
    if kind.tag in KERNEL_CODES:
        t = kernel_tables(A)
        bits = _backend.get(backend).rasterize_union(
            KERNEL_CODES[kind.tag], xs, ys, t["dre"], t["dim"], t["r"], t["dsum"],
            t["k_rhs"], t["delta_rhs"], t["l_rhs"], t["lam_rhs"],
        )
    else:
        bits = _rasterize_single(A, kind, xs, ys)
    return RasterGrid(box, width, height, np.ascontiguousarray(bits, dtype=bool))


def area(grid: RasterGrid) -> float:
    return grid.count() * grid.cell_width * grid.cell_height


def grid_subset(a: RasterGrid, b: RasterGrid) -> bool:
    """True iff every set cell of ``a`` is set in ``b``."""
    if not same_geometry(a, b):
        raise GeometryMismatchError("grids differ in box or dimensions")
    return not bool(np.any(a.bits & ~b.bits))


def subset_violations(a: RasterGrid, b: RasterGrid) -> int:
    if not same_geometry(a, b):
        raise GeometryMismatchError("grids differ in box or dimensions")
    return int(np.count_nonzero(a.bits & ~b.bits))


# -- image output ----------------------------------------------------------------

Layer = tuple[RasterGrid, str]


def _rgb(color: str) -> tuple[int, int, int]:
    c = color.lstrip("#")
    return int(c[0:2], 16), int(c[2:4], 16), int(c[4:6], 16)


def _layers_geometry(layers: Sequence[Layer], geometry: RasterGrid | None) -> RasterGrid:
    base = geometry if geometry is not None else (layers[0][0] if layers else None)
    if base is None:
        raise ValueError("need at least one layer or an explicit geometry")
    for grid, _ in layers:
        if not same_geometry(grid, base):
            raise GeometryMismatchError("layers must share box and dimensions")
    return base


def _as_layers(layers) -> list[Layer]:
    if isinstance(layers, RasterGrid):
        return [(layers, MARKER_COLOR)]
    return list(layers)


def emit_ppm(layers, markers: Iterable[complex] = (), geometry: RasterGrid | None = None) -> bytes:
    """Plain P3 image, one pixel per cell; later layers paint over earlier ones.

    A bare grid is drawn in black. Marker cells are painted black last.
    """
    layers = _as_layers(layers)
    base = _layers_geometry(layers, geometry)
    img = np.full((base.height, base.width, 3), 255, dtype=np.uint8)
    for grid, color in layers:
        img[grid.bits] = _rgb(color)
    for z in markers:
        cell = base.cell_of(complex(z))
        if cell is not None:
            img[cell] = _rgb(MARKER_COLOR)
    lines = [f"P3\n{base.width} {base.height}\n255\n"]
    for row in img:
        lines.append(" ".join(f"{p[0]} {p[1]} {p[2]}" for p in row) + "\n")
    return "".join(lines).encode("ascii")


def _fmt(v: float) -> str:
    v = float(v)
    return "0" if v == 0 else repr(v)


def emit_svg(
    layers: Sequence[tuple[RasterGrid, str]] | Sequence[tuple[RasterGrid, str, str]],
    markers: Iterable[complex] = (),
    geometry: RasterGrid | None = None,
) -> bytes:
    """SVG 1.1 with the viewBox in complex-plane units (y axis is ``-im``).

    ``layers`` items are ``(grid, color)`` or ``(grid, color, name)``; each layer
    is a ``<g>`` holding one ``<rect>`` per set cell.  Markers are asterisks.
    """
    named = []
    for k, item in enumerate(layers):
        grid, color = item[0], item[1]
        name = item[2] if len(item) > 2 else f"layer{k}"
        named.append((grid, color, name))
    base = _layers_geometry([(g, c) for g, c, _ in named], geometry)
    b = base.box
    dx, dy = base.cell_width, base.cell_height
    vw, vh = b.re_max - b.re_min, b.im_max - b.im_min
    scale = max(1, 512 // max(base.width, base.height))
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>\n',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{base.width * scale}" height="{base.height * scale}" '
        f'viewBox="{_fmt(b.re_min)} {_fmt(-b.im_max)} {_fmt(vw)} {_fmt(vh)}" '
        f'preserveAspectRatio="none" shape-rendering="crispEdges">\n',
        f'<rect x="{_fmt(b.re_min)}" y="{_fmt(-b.im_max)}" width="{_fmt(vw)}" height="{_fmt(vh)}" fill="#FFFFFF"/>\n',
    ]
    for grid, color, name in named:
        out.append(f'<g id="layer-{name}" fill="{color}" fill-opacity="{SVG_LAYER_OPACITY}">\n')
        rows, cols = np.nonzero(grid.bits)
        for r, c in zip(rows.tolist(), cols.tolist()):
            out.append(
                f'<rect x="{_fmt(b.re_min + c * dx)}" y="{_fmt(-b.im_max + r * dy)}" '
                f'width="{_fmt(dx)}" height="{_fmt(dy)}"/>\n'
            )
        out.append("</g>\n")
    arm = 0.015 * max(vw, vh)
    diag = arm * 0.7071067811865476
    out.append(f'<g id="markers" stroke="{MARKER_COLOR}" fill="none" stroke-width="{_fmt(arm / 4)}">\n')
    for z in markers:
        z = complex(z)
        x, y = z.real, -z.imag
        d = (
            f"M {_fmt(x - arm)} {_fmt(y)} L {_fmt(x + arm)} {_fmt(y)} "
            f"M {_fmt(x)} {_fmt(y - arm)} L {_fmt(x)} {_fmt(y + arm)} "
            f"M {_fmt(x - diag)} {_fmt(y - diag)} L {_fmt(x + diag)} {_fmt(y + diag)} "
            f"M {_fmt(x - diag)} {_fmt(y + diag)} L {_fmt(x + diag)} {_fmt(y - diag)}"
        )
        out.append(f'<path d="{d}" data-re="{_fmt(z.real)}" data-im="{_fmt(z.imag)}"/>\n')
    out.append("</g>\n</svg>\n")
    return "".join(out).encode("utf-8")


def emit_pbm(grid: RasterGrid) -> bytes:
    """Raw membership bits as plain PBM (P1), 1 = in the set."""
    lines = [f"P1\n{grid.width} {grid.height}\n"]
    for row in grid.bits:
        lines.append(" ".join("1" if v else "0" for v in row) + "\n")
    return "".join(lines).encode("ascii")
