from abc import ABC, abstractmethod
from typing import Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..base.dataset import as_grid
from ..base.errors import DomainError, InputError
from ..spectral.decomp import as_symmetric, sym_eigendecomp
from ..spectral.ops import PSD_TOL

__all__ = [
    "KernelSpec",
    "BrownianKernel",
    "FBMKernel",
    "TabulatedKernel",
    "gram_matrix",
]


class KernelSpec(ABC):
    """A covariance kernel K(s, t) evaluable on pairs of points in its domain"""

    kind: str = ""

    @abstractmethod
    def _evaluate(self, s: NDArray[np.float64], t: NDArray[np.float64]) -> NDArray[np.float64]:
        """Evaluate on broadcast arrays of points already checked against the domain."""
        pass

    @abstractmethod
    def _check_domain(self, points: NDArray[np.float64]) -> None:
        pass

    def __call__(
        self, s: ArrayLike, t: ArrayLike
    ) -> Union[float, NDArray[np.float64]]:
        s_arr = np.asarray(s, dtype=np.float64)
        t_arr = np.asarray(t, dtype=np.float64)
        self._check_domain(s_arr.reshape(-1))
        self._check_domain(t_arr.reshape(-1))
        out = self._evaluate(s_arr, t_arr)
        return float(out) if np.ndim(out) == 0 else out

    def gram(self, grid: ArrayLike) -> NDArray[np.float64]:
        """Gram matrix [K(t_i, t_j)] on the grid."""
        points = np.asarray(grid, dtype=np.float64).reshape(-1)
        self._check_domain(points)
        g = self._evaluate(points[:, None], points[None, :])
        return (g + g.T) / 2.0


class _HalfLineKernel(KernelSpec):
    def _check_domain(self, points: NDArray[np.float64]) -> None:
        if points.size and (not np.all(np.isfinite(points)) or points.min() < 0):
            raise DomainError(f"{self.kind} kernel is defined on [0, inf); got min point {points.min()}")


class BrownianKernel(_HalfLineKernel):
    """Standard Brownian motion covariance K(s, t) = min(s, t)"""

    kind = "brownian"

    def _evaluate(self, s, t):
        return np.minimum(s, t)

    def __repr__(self) -> str:
        return "BrownianKernel()"


class FBMKernel(_HalfLineKernel):
    """Fractional Brownian motion covariance.

    K(s, t) = (s^{2H} + t^{2H} - |s - t|^{2H}) / 2, H in (0, 1).
    H = 1/2 gives the Brownian kernel.
    """

    kind = "fbm"

    def __init__(self, hurst: float = 0.75):
        if not (0.0 < hurst < 1.0):
            raise InputError(f"hurst index must lie in (0, 1), got {hurst}")
        self.hurst = float(hurst)

    def _evaluate(self, s, t):
        h2 = 2.0 * self.hurst
        return 0.5 * (np.abs(s) ** h2 + np.abs(t) ** h2 - np.abs(s - t) ** h2)

    def __repr__(self) -> str:
        return f"FBMKernel(hurst={self.hurst})"


class TabulatedKernel(KernelSpec):
    """A kernel known only through its Gram matrix on a fixed grid.

    Args:
        grid: Strictly increasing points
        matrix: Symmetric PSD matrix with entries K(grid[i], grid[j])

    Raises:
        InputError: If shapes disagree or the matrix is not symmetric PSD
    """

    kind = "tabulated"

    def __init__(self, grid: ArrayLike, matrix: ArrayLike):
        self.grid = as_grid(grid)
        self.matrix = as_symmetric(matrix, "tabulated kernel matrix")
        if self.matrix.shape[0] != self.grid.size:
            raise InputError(
                f"tabulated kernel matrix is {self.matrix.shape[0]}x{self.matrix.shape[0]} "
                f"but the grid has {self.grid.size} points"
            )
        eigenvalues = sym_eigendecomp(self.matrix).eigenvalues
        if eigenvalues[-1] < -PSD_TOL * max(abs(eigenvalues[0]), 1e-300):
            raise InputError(
                f"tabulated kernel matrix is not PSD: smallest eigenvalue {eigenvalues[-1]:.3e}"
            )

    @classmethod
    def from_csv(cls, path: str) -> "TabulatedKernel":
        """Load from the kernel matrix CSV format of funcsir.store."""
        from ..store.csv import read_kernel_matrix

        grid, matrix = read_kernel_matrix(path)
        return cls(grid, matrix)

    def _index(self, points: NDArray[np.float64]) -> NDArray[np.intp]:
        idx = np.clip(np.searchsorted(self.grid, points), 0, self.grid.size - 1)
        return idx

    def _check_domain(self, points: NDArray[np.float64]) -> None:
        if points.size == 0:
            return
        idx = self._index(points)
        off = self.grid[idx] != points
        if np.any(off):
            raise DomainError(
                f"tabulated kernel queried off-grid at {points[off][0]!r}"
            )

    def _evaluate(self, s, t):
        s_b, t_b = np.broadcast_arrays(s, t)
        return self.matrix[self._index(s_b), self._index(t_b)]

    def __repr__(self) -> str:
        return f"TabulatedKernel(J={self.grid.size})"


def gram_matrix(kernel: KernelSpec, grid: ArrayLike) -> NDArray[np.float64]:
    """Gram matrix of the kernel on a strictly increasing grid.

    Raises:
        DomainError: If a grid point lies outside the kernel's domain
    """
    return kernel.gram(as_grid(grid))
