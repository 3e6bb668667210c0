"""Eigenvalue inclusion sets: Gershgorin disks, Brauer ovals, disks with an
excluded inner disk and two exclusion-refined oval sets, with rasterisation,
nonsingularity certificates and an independent spectrum oracle."""

from importlib import resources

from ._backend import DEFAULT as RASTER_BACKEND
from .certify import CertReport, cert_corollary1, cert_corollary2
from .linalg import (
    ComplexMatrix,
    PrngState,
    deleted_row_sum,
    load_matrix,
    parse_matrix,
    prng_next,
    prng_uniform,
    row_sum,
    serialize_matrix,
)
from .raster import BoundingBox, RasterGrid, area, auto_box, emit_ppm, emit_svg, grid_subset, rasterize
from .regions import (
    BRAUER,
    GERSH,
    OMEGA,
    PHI,
    THETA,
    RegionKind,
    brauer_contains,
    eigen_contains,
    gersh_contains,
    omega_contains,
    oval_count,
    phi_contains,
    region_contains,
    theta_contains,
)
from .spectra import char_poly, determinant, eigenvalues, known_spectrum_matrix, roots


def fixture_path(name: str):
    """Path to a bundled matrix file, e.g. ``fixture_path("example31.json")``."""
    return resources.files(__name__).joinpath("data", name)


def load_fixture(name: str) -> ComplexMatrix:
    return parse_matrix(fixture_path(name).read_bytes())
