"""Simulation designs: functional single-index models and a multivariate baseline."""

from dataclasses import dataclass
from typing import Callable, Dict, List, Literal, Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field

from ..base.dataset import Dataset
from ..base.errors import InputError
from .processes import brownian_paths, fgp_paths, make_rng

__all__ = [
    "ModelName",
    "LinkName",
    "LINKS",
    "SimConfig",
    "SimOutput",
    "example1_beta",
    "example1_grid",
    "example2_grid",
    "EXAMPLE2_INDEX_POINTS",
    "gen_example1",
    "gen_example2",
    "gen_finite_dim",
    "gen_null",
    "simulate",
    "bm_eigenvalue",
]

ModelName = Literal["example1", "example2", "finite_dim", "null_model"]
LinkName = Literal["identity", "exp", "arctan"]

LINKS: Dict[str, Callable[[NDArray[np.float64]], NDArray[np.float64]]] = {
    "identity": lambda v: v,
    "exp": np.exp,
    "arctan": np.arctan,
}

# grid indices i (points i/121) entering the index of the second design
EXAMPLE2_INDEX_POINTS = (30, 31, 32, 90, 91, 92)


class SimConfig(BaseModel):
    """Parameters of a simulation run; unset sizes take the design defaults."""

    model_config = ConfigDict(frozen=True)

    model: ModelName = "example1"
    n: Optional[int] = Field(default=None, ge=2)
    grid_size: Optional[int] = Field(default=None, ge=1)
    noise_sd: float = Field(default=0.3, ge=0)
    seed: int = 0
    dim: int = Field(default=5, ge=1)
    beta: Optional[List[float]] = None
    link: LinkName = "identity"
    hurst: float = Field(default=0.75, gt=0, lt=1)


@dataclass(frozen=True)
class SimOutput:
    """Simulated data with the true indices.

    Attributes:
        dataset: Curves and responses
        xi_true: n x p_true true index values
        beta_true: J x p_true discretized index representers, when they exist
    """

    dataset: Dataset
    xi_true: NDArray[np.float64]
    beta_true: Optional[NDArray[np.float64]] = None


def example1_beta(t: ArrayLike) -> NDArray[np.float64]:
    """beta(s) = sin(3 pi s / 2)."""
    return np.sin(1.5 * np.pi * np.asarray(t, dtype=np.float64))


def example1_grid(J: int) -> NDArray[np.float64]:
    """Equally spaced points j / J, j = 1..J."""
    return np.arange(1, J + 1) / J


def example2_grid() -> NDArray[np.float64]:
    """The 120 points i / 121, i = 1..120."""
    return np.arange(1, 121) / 121.0


def _noise(rng: np.random.Generator, n: int, noise_sd: float) -> NDArray[np.float64]:
    return noise_sd * rng.standard_normal(n)


def gen_example1(
    n: int = 100,
    J: int = 100,
    noise_sd: float = 0.3,
    seed: int = 0,
    beta: Callable[[NDArray[np.float64]], NDArray[np.float64]] = example1_beta,
) -> SimOutput:
    """Brownian curves with Y = exp(integral of beta X) + noise.

    The integral is the Riemann sum (1/J) sum_j beta(t_j) X(t_j) on t_j = j / J.
    """
    rng = make_rng(seed)
    grid = example1_grid(J)
    x = brownian_paths(grid, n, rng)
    weights = np.asarray(beta(grid), dtype=np.float64) / J
    xi = x @ weights
    y = np.exp(xi) + _noise(rng, n, noise_sd)
    return SimOutput(
        dataset=Dataset(grid=grid, x=x, y=y),
        xi_true=xi[:, None],
        beta_true=np.asarray(beta(grid), dtype=np.float64)[:, None],
    )


def gen_example2(
    n: int = 80, noise_sd: float = 0.3, seed: int = 0, hurst: float = 0.75
) -> SimOutput:
    """Fractional Gaussian curves with Y = arctan(sum of six point values) + noise.

    The index is not an L2 inner product with a smooth curve, so beta_true is None.
    """
    rng = make_rng(seed)
    grid = example2_grid()
    x = fgp_paths(grid, hurst, n, rng)
    columns = [i - 1 for i in EXAMPLE2_INDEX_POINTS]
    xi = x[:, columns].sum(axis=1)
    y = np.arctan(xi) + _noise(rng, n, noise_sd)
    return SimOutput(dataset=Dataset(grid=grid, x=x, y=y), xi_true=xi[:, None])


def gen_finite_dim(
    n: int = 2000,
    dim: int = 5,
    beta: Optional[ArrayLike] = None,
    link: LinkName = "identity",
    noise_sd: float = 0.3,
    seed: int = 0,
) -> SimOutput:
    """Multivariate single-index model with i.i.d. standard Gaussian predictors.

    beta defaults to (1, 1, 0, ..., 0) / sqrt(2).
    """
    if link not in LINKS:
        raise InputError(f"unknown link {link!r}; expected one of {sorted(LINKS)}")
    if beta is None:
        b = np.zeros(dim)
        b[: min(2, dim)] = 1.0
        b /= np.linalg.norm(b)
    else:
        b = np.asarray(beta, dtype=np.float64).reshape(-1)
    if b.size != dim:
        raise InputError(f"beta has {b.size} entries, expected dim={dim}")
    rng = make_rng(seed)
    x = rng.standard_normal((n, dim))
    xi = x @ b
    y = LINKS[link](xi) + _noise(rng, n, noise_sd)
    return SimOutput(
        dataset=Dataset(grid=np.arange(1, dim + 1) / dim, x=x, y=y),
        xi_true=xi[:, None],
        beta_true=b[:, None],
    )


def gen_null(n: int = 100, J: int = 100, noise_sd: float = 0.3, seed: int = 0) -> SimOutput:
    """Brownian curves with a response independent of them."""
    rng = make_rng(seed)
    grid = example1_grid(J)
    x = brownian_paths(grid, n, rng)
    y = _noise(rng, n, noise_sd) if noise_sd > 0 else rng.standard_normal(n)
    return SimOutput(dataset=Dataset(grid=grid, x=x, y=y), xi_true=np.zeros((n, 0)))


def simulate(config: SimConfig) -> SimOutput:
    """Run the design named by config.model."""
    if config.model == "example1":
        return gen_example1(
            n=config.n or 100,
            J=config.grid_size or 100,
            noise_sd=config.noise_sd,
            seed=config.seed,
        )
    if config.model == "example2":
        return gen_example2(
            n=config.n or 80, noise_sd=config.noise_sd, seed=config.seed, hurst=config.hurst
        )
    if config.model == "finite_dim":
        return gen_finite_dim(
            n=config.n or 2000,
            dim=config.dim,
            beta=config.beta,
            link=config.link,
            noise_sd=config.noise_sd,
            seed=config.seed,
        )
    return gen_null(
        n=config.n or 100,
        J=config.grid_size or 100,
        noise_sd=config.noise_sd,
        seed=config.seed,
    )


def bm_eigenvalue(j: int) -> float:
    """j-th eigenvalue 4 / ((2j - 1)^2 pi^2) of the Brownian covariance operator on L2[0, 1]."""
    if j < 1:
        raise InputError(f"eigenvalue index must be >= 1, got {j}")
    return 4.0 / ((2 * j - 1) ** 2 * np.pi**2)
