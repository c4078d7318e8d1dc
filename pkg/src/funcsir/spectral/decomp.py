"""Dense symmetric eigendecomposition with a deterministic sign convention."""

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from ..base.errors import InputError, NumericalError

__all__ = ["SpectralDecomp", "as_symmetric", "sym_eigendecomp", "SYMMETRY_TOL", "EIGH_DRIVERS"]

logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-8

# LAPACK drivers tried in order when the previous one fails to converge
EIGH_DRIVERS = ("evr", "evd", "ev")


@dataclass(frozen=True)
class SpectralDecomp:
    """Eigenvalues (descending) and orthonormal eigenvectors of a symmetric matrix.

    Attributes:
        eigenvalues: Real eigenvalues sorted in nonincreasing order
        eigenvectors: Matrix whose j-th column is the eigenvector of eigenvalues[j]
    """

    eigenvalues: NDArray[np.float64]
    eigenvectors: NDArray[np.float64]

    @property
    def source_dim(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def lambda_1(self) -> float:
        return float(self.eigenvalues[0])

    def reconstruct(self) -> NDArray[np.float64]:
        """Assemble sum_j lambda_j u_j u_j^T."""
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.T


def as_symmetric(a: ArrayLike, name: str = "matrix") -> NDArray[np.float64]:
    """Validate a square finite matrix and return its symmetric part.

    Matrices whose relative asymmetry ``||A - A^T||_F / ||A||_F`` exceeds
    SYMMETRY_TOL are rejected.

    Raises:
        InputError: If the matrix is not square, has non-finite entries or is
            not symmetric to tolerance
    """
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise InputError(f"{name} must be a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} has non-finite entries")
    scale = np.linalg.norm(arr)
    asym = np.linalg.norm(arr - arr.T)
    if asym > SYMMETRY_TOL * scale:
        raise InputError(
            f"{name} is not symmetric: relative asymmetry {asym / scale:.3e} exceeds {SYMMETRY_TOL:g}"
        )
    return (arr + arr.T) / 2.0


def _fix_signs(vectors: NDArray[np.float64]) -> NDArray[np.float64]:
    # largest-magnitude component of each column made positive
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def sym_eigendecomp(a: ArrayLike) -> SpectralDecomp:
    """Eigendecompose a symmetric matrix.

    Args:
        a: Square symmetric matrix with finite entries

    Returns:
        SpectralDecomp with eigenvalues in descending order. Each eigenvector is
        signed so that its first component of largest magnitude is positive.

    Raises:
        InputError: If the input is rejected by as_symmetric
        NumericalError: If every LAPACK driver fails to converge
    """
    sym = as_symmetric(a)
    dim = sym.shape[0]
    try:
        for attempt in Retrying(
            reraise=True,
            stop=stop_after_attempt(len(EIGH_DRIVERS)),
            retry=retry_if_exception_type(linalg.LinAlgError),
        ):
            with attempt:
                driver = EIGH_DRIVERS[attempt.retry_state.attempt_number - 1]
                if attempt.retry_state.attempt_number > 1:
                    logger.debug(f"eigh retry on {dim}x{dim} matrix with driver {driver}")
                values, vectors = linalg.eigh(sym, driver=driver)
    except linalg.LinAlgError as e:
        raise NumericalError(
            f"eigendecomposition of a {dim}x{dim} matrix failed to converge: {e}"
        ) from e

    values = values[::-1].copy()
    vectors = _fix_signs(vectors[:, ::-1].copy())
    return SpectralDecomp(eigenvalues=values, eigenvectors=vectors)
