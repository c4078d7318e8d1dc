from dataclasses import dataclass
from typing import Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import InputError

__all__ = ["Dataset", "GridFunction", "as_grid", "as_values"]


def as_grid(points: ArrayLike, name: str = "grid") -> NDArray[np.float64]:
    """Validate a grid: a non-empty, finite, strictly increasing 1-d array."""
    grid = np.asarray(points, dtype=np.float64)
    if grid.ndim != 1 or grid.size == 0:
        raise InputError(f"{name} must be a non-empty 1-d sequence, got shape {grid.shape}")
    if not np.all(np.isfinite(grid)):
        raise InputError(f"{name} contains non-finite values")
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise InputError(f"{name} must be strictly increasing")
    return grid


@dataclass(frozen=True)
class GridFunction:
    """A function known through its values on a strictly increasing grid.

    Attributes:
        grid: The grid points t_1 < ... < t_J
        values: f(t_1), ..., f(t_J)
    """

    grid: NDArray[np.float64]
    values: NDArray[np.float64]

    def __post_init__(self):
        grid = as_grid(self.grid)
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != grid.shape:
            raise InputError(
                f"values has shape {values.shape}, grid has shape {grid.shape}"
            )
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    def restrict(self, points: ArrayLike) -> "GridFunction":
        """Restrict to a subset of the grid (f_n = f restricted to S_n)."""
        sub = as_grid(points, "points")
        idx = np.searchsorted(self.grid, sub)
        idx = np.clip(idx, 0, self.grid.size - 1)
        if not np.array_equal(self.grid[idx], sub):
            raise InputError("restriction points must be a subset of the grid")
        return GridFunction(grid=sub, values=self.values[idx])


def as_values(f: Union[GridFunction, ArrayLike]) -> NDArray[np.float64]:
    """Return the value vector of a GridFunction or array-like."""
    if isinstance(f, GridFunction):
        return f.values
    return np.asarray(f, dtype=np.float64).reshape(-1)


@dataclass(frozen=True)
class Dataset:
    """Curves observed on a shared grid, with scalar responses.

    Attributes:
        grid: J strictly increasing observation points
        x: n x J matrix, row i holds curve i at the grid
        y: n responses
    """

    grid: NDArray[np.float64]
    x: NDArray[np.float64]
    y: NDArray[np.float64]

    def __post_init__(self):
        grid = as_grid(self.grid)
        x = np.atleast_2d(np.asarray(self.x, dtype=np.float64))
        y = np.asarray(self.y, dtype=np.float64).reshape(-1)
        if x.ndim != 2:
            raise InputError(f"x must be a 2-d matrix, got {x.ndim} dimensions")
        n, J = x.shape
        if n < 2:
            raise InputError(f"a dataset needs at least 2 observations, got {n}")
        if J != grid.size:
            raise InputError(f"x has {J} columns but the grid has {grid.size} points")
        if y.size != n:
            raise InputError(f"x has {n} rows but y has {y.size} entries")
        if not np.all(np.isfinite(x)):
            raise InputError("x contains non-finite values")
        if not np.all(np.isfinite(y)):
            raise InputError("y contains non-finite values")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def J(self) -> int:
        return self.x.shape[1]

    def take(self, rows: ArrayLike) -> "Dataset":
        """Return the sub-dataset made of the given row indices."""
        idx = np.asarray(rows, dtype=np.intp)
        return Dataset(grid=self.grid, x=self.x[idx], y=self.y[idx])
