import warnings
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..base.errors import EigengapWarning, InputError, UndefinedGapError
from ..base.policy import DEFAULT_POLICY, RankPolicy
from .decomp import SpectralDecomp, sym_eigendecomp

__all__ = [
    "retained_mask",
    "retained_rank",
    "generalized_power",
    "moore_penrose",
    "top_k_projection",
    "truncated_power",
    "truncate_covariance",
    "eigengap",
    "hs_norm",
    "min_eigenvalue",
    "cut_has_tie",
    "PSD_TOL",
]

# relative tolerance on the smallest eigenvalue for "positive semi-definite"
PSD_TOL = 1e-9


def retained_mask(d: SpectralDecomp, policy: RankPolicy = DEFAULT_POLICY) -> NDArray[np.bool_]:
    """Boolean mask of the eigenvalues that count as strictly positive under policy."""
    return d.eigenvalues > policy.threshold(d.lambda_1)


def retained_rank(d: SpectralDecomp, policy: RankPolicy = DEFAULT_POLICY) -> int:
    """Number of eigenvalues retained by policy."""
    return int(np.count_nonzero(retained_mask(d, policy)))


def _assemble(vectors: NDArray[np.float64], weights: NDArray[np.float64]) -> NDArray[np.float64]:
    out = (vectors * weights) @ vectors.T
    return (out + out.T) / 2.0


def generalized_power(
    d: SpectralDecomp, alpha: float, policy: RankPolicy = DEFAULT_POLICY
) -> NDArray[np.float64]:
    """Spectral power over the strictly positive eigenvalues.

    Returns sum over retained j of lambda_j**alpha u_j u_j^T. alpha = 0 gives the
    orthogonal projection onto the retained range, alpha = -1 the Moore-Penrose
    inverse.
    """
    if not np.isfinite(alpha):
        raise InputError(f"alpha must be finite, got {alpha}")
    mask = retained_mask(d, policy)
    return _assemble(d.eigenvectors[:, mask], d.eigenvalues[mask] ** alpha)


def moore_penrose(d: SpectralDecomp, policy: RankPolicy = DEFAULT_POLICY) -> NDArray[np.float64]:
    """Moore-Penrose inverse A^- of the decomposed matrix."""
    return generalized_power(d, -1.0, policy)


def cut_has_tie(d: SpectralDecomp, k: int, policy: RankPolicy = DEFAULT_POLICY) -> bool:
    """Whether lambda_k and lambda_{k+1} are tied to within rel_tol * lambda_1."""
    if k >= d.source_dim:
        return False
    gap = d.eigenvalues[k - 1] - d.eigenvalues[k]
    return bool(gap < policy.rel_tol * abs(d.lambda_1))


def _check_k(d: SpectralDecomp, k: int) -> None:
    if not (1 <= k <= d.source_dim):
        raise InputError(f"k must lie in [1, {d.source_dim}], got {k}")


def _warn_tie(d: SpectralDecomp, k: int, policy: RankPolicy) -> None:
    if cut_has_tie(d, k, policy):
        warnings.warn(
            f"eigenvalues {k} and {k + 1} are tied "
            f"({d.eigenvalues[k - 1]:.6g} vs {d.eigenvalues[k]:.6g}); "
            "the top-k eigenspace is not uniquely defined",
            EigengapWarning,
            stacklevel=3,
        )


def top_k_projection(
    d: SpectralDecomp, k: int, policy: RankPolicy = DEFAULT_POLICY
) -> NDArray[np.float64]:
    """Projection onto the eigenspace of the first k eigenvalues.

    Raises:
        InputError: If k is outside [1, dim]
    """
    _check_k(d, k)
    _warn_tie(d, k, policy)
    return _assemble(d.eigenvectors[:, :k], np.ones(k))


def truncated_power(
    d: SpectralDecomp,
    k: int,
    alpha: float,
    policy: RankPolicy = DEFAULT_POLICY,
    check_tie: bool = True,
) -> NDArray[np.float64]:
    """Generalized power of the rank-k truncation P_k A P_k.

    Equals generalized_power(sym_eigendecomp(truncate_covariance(A, k)), alpha)
    but reuses the decomposition of A: the truncation keeps the top k
    eigenpairs, of which those passing policy are raised to alpha.
    """
    _check_k(d, k)
    if check_tie:
        _warn_tie(d, k, policy)
    mask = retained_mask(d, policy)[:k]
    return _assemble(d.eigenvectors[:, :k][:, mask], d.eigenvalues[:k][mask] ** alpha)


def min_eigenvalue(a: ArrayLike) -> float:
    """Smallest eigenvalue of a symmetric matrix."""
    return float(sym_eigendecomp(a).eigenvalues[-1])


def truncate_covariance(
    a: ArrayLike, k: int, policy: RankPolicy = DEFAULT_POLICY
) -> NDArray[np.float64]:
    """Return R_k = P_k A P_k = sum_{j<=k} lambda_j u_j u_j^T.

    Raises:
        InputError: If A is not PSD to tolerance or k is out of range
    """
    d = sym_eigendecomp(a)
    _check_k(d, k)
    if d.eigenvalues[-1] < -PSD_TOL * max(abs(d.lambda_1), 1.0):
        raise InputError(
            f"matrix is not positive semi-definite: smallest eigenvalue {d.eigenvalues[-1]:.3e}"
        )
    _warn_tie(d, k, policy)
    return _assemble(d.eigenvectors[:, :k], d.eigenvalues[:k])


def eigengap(d: SpectralDecomp, m: int, policy: Optional[RankPolicy] = None) -> float:
    """Minimal distance from lambda_m to the eigenvalues distinct from it.

    Two eigenvalues are considered equal when they differ by at most
    rel_tol * |lambda_1| (exact comparison when policy is None).

    Args:
        d: Decomposition
        m: 1-based eigenvalue index

    Raises:
        InputError: If m is outside [1, dim]
        UndefinedGapError: If no eigenvalue differs from lambda_m
    """
    _check_k(d, m)
    tol = 0.0 if policy is None else policy.rel_tol * abs(d.lambda_1)
    diffs = np.abs(d.eigenvalues - d.eigenvalues[m - 1])
    distinct = diffs[diffs > tol]
    if distinct.size == 0:
        raise UndefinedGapError(
            f"eigengap undefined: all {d.source_dim} eigenvalues equal {d.eigenvalues[m - 1]:.6g}"
        )
    return float(distinct.min())


def hs_norm(a: ArrayLike) -> float:
    """Hilbert-Schmidt (Frobenius) norm sqrt(tr(A A^T))."""
    arr = np.asarray(a, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise InputError("matrix has non-finite entries")
    return float(np.linalg.norm(arr))
