"""Seeded Gaussian process path generators on a grid."""

import hashlib
import warnings

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..base.dataset import as_grid
from ..base.errors import ClippingWarning, InputError, NumericalError
from ..rkhs.kernels import FBMKernel
from ..spectral.decomp import sym_eigendecomp

__all__ = [
    "make_rng",
    "derive_seed",
    "brownian_paths",
    "brownian_path",
    "fgp_factor",
    "fgp_paths",
    "fgp_path",
    "CLIP_TOL",
]

# negative eigenvalues down to -CLIP_TOL * lambda_1 are clipped to zero
CLIP_TOL = 1e-10


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator; Gaussian draws use its ziggurat standard_normal."""
    return np.random.Generator(np.random.PCG64(seed))


def derive_seed(seed: int, task: int) -> int:
    """Per-task seed: the first 8 bytes of sha256(str(seed XOR task))."""
    digest = hashlib.sha256(str(seed ^ task).encode()).digest()
    return int.from_bytes(digest[:8], "little")


def _unit_grid(grid: ArrayLike) -> NDArray[np.float64]:
    points = as_grid(grid)
    if points[0] < 0 or points[-1] > 1:
        raise InputError(f"grid must lie in [0, 1], got [{points[0]}, {points[-1]}]")
    return points


def brownian_paths(grid: ArrayLike, n: int, rng: np.random.Generator) -> NDArray[np.float64]:
    """n standard Brownian motion paths on the grid, one per row.

    Built by cumulating independent Gaussian increments whose variances are the
    grid gaps (the first gap measured from 0).
    """
    points = _unit_grid(grid)
    gaps = np.diff(points, prepend=0.0)
    increments = rng.standard_normal((n, points.size)) * np.sqrt(gaps)
    return np.cumsum(increments, axis=1)


def brownian_path(grid: ArrayLike, seed: int) -> NDArray[np.float64]:
    """A single Brownian path on the grid."""
    return brownian_paths(grid, 1, make_rng(seed))[0]


def fgp_factor(grid: ArrayLike, hurst: float) -> NDArray[np.float64]:
    """Symmetric square root of the fractional Brownian motion Gram matrix.

    Raises:
        NumericalError: If the Gram matrix has an eigenvalue below -CLIP_TOL * lambda_1
    """
    points = _unit_grid(grid)
    d = sym_eigendecomp(FBMKernel(hurst).gram(points))
    lowest = d.eigenvalues[-1]
    if lowest < -CLIP_TOL * d.lambda_1:
        raise NumericalError(
            f"fGp Gram matrix on {points.size} points is indefinite: eigenvalue {lowest:.3e}"
        )
    if lowest < 0:
        warnings.warn(
            f"clipped fGp Gram eigenvalues down to {lowest:.3e} at zero",
            ClippingWarning,
            stacklevel=2,
        )
    root = np.sqrt(np.clip(d.eigenvalues, 0.0, None))
    factor = (d.eigenvectors * root) @ d.eigenvectors.T
    return (factor + factor.T) / 2.0


def fgp_paths(
    grid: ArrayLike, hurst: float, n: int, rng: np.random.Generator
) -> NDArray[np.float64]:
    """n fractional Gaussian process paths with covariance (s^2H + t^2H - |s-t|^2H) / 2."""
    factor = fgp_factor(grid, hurst)
    return rng.standard_normal((n, factor.shape[0])) @ factor


def fgp_path(grid: ArrayLike, hurst: float, seed: int) -> NDArray[np.float64]:
    """A single fractional Gaussian process path on the grid."""
    return fgp_paths(grid, hurst, 1, make_rng(seed))[0]
