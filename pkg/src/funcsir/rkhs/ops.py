"""Finite-grid RKHS computations: inner products, Fortet norms, dominance and projections."""

import warnings
from typing import Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..base.dataset import GridFunction, as_values
from ..base.errors import (
    DegenerateDirectionError,
    DominanceWarning,
    InputError,
    MembershipError,
)
from ..base.policy import DEFAULT_POLICY, RankPolicy
from ..spectral.decomp import SpectralDecomp, as_symmetric, sym_eigendecomp
from ..spectral.ops import (
    PSD_TOL,
    generalized_power,
    moore_penrose,
    retained_mask,
    truncated_power,
)

__all__ = [
    "RANGE_TOL",
    "range_residual",
    "rkhs_inner",
    "fortet_ratio",
    "fortet_norm_sq",
    "fortet_sup",
    "dominance_trace",
    "residual_trace",
    "residual_trace_sweep",
    "residual_trace_terms",
    "sweep_from_terms",
    "loeve_coefficients",
    "rkhs_project",
]

# ||(I - K K^-) f|| <= RANGE_TOL ||f|| decides membership of f in Im(K)
RANGE_TOL = 1e-6

# relative size of a^T K a below which a Fortet direction is degenerate
DENOMINATOR_TOL = 1e-14

VectorLike = Union[GridFunction, ArrayLike]


def _vector(f: VectorLike, dim: int, name: str) -> NDArray[np.float64]:
    v = as_values(f)
    if v.shape != (dim,):
        raise InputError(f"{name} has {v.size} values, expected {dim}")
    if not np.all(np.isfinite(v)):
        raise InputError(f"{name} has non-finite values")
    return v


def range_residual(f: VectorLike, d: SpectralDecomp, policy: RankPolicy = DEFAULT_POLICY) -> float:
    """Norm of the component of f outside the retained range of the decomposed matrix."""
    v = _vector(f, d.source_dim, "f")
    projection = generalized_power(d, 0.0, policy)
    return float(np.linalg.norm(v - projection @ v))


def _require_member(v: NDArray[np.float64], d: SpectralDecomp, policy: RankPolicy, name: str) -> None:
    residual = range_residual(v, d, policy)
    norm = float(np.linalg.norm(v))
    if residual > RANGE_TOL * norm:
        raise MembershipError(
            f"{name} is outside the range of the kernel matrix: "
            f"residual {residual:.3e} exceeds {RANGE_TOL:g} x ||{name}|| = {RANGE_TOL * norm:.3e}"
        )


def rkhs_inner(
    f: VectorLike, g: VectorLike, R: ArrayLike, policy: RankPolicy = DEFAULT_POLICY
) -> float:
    """RKHS inner product <f, g> = f^T R^- g on a finite grid.

    Raises:
        MembershipError: If f or g is detectably outside Im(R)
    """
    d = sym_eigendecomp(R)
    fv = _vector(f, d.source_dim, "f")
    gv = _vector(g, d.source_dim, "g")
    _require_member(fv, d, policy, "f")
    _require_member(gv, d, policy, "g")
    return float(fv @ moore_penrose(d, policy) @ gv)


def fortet_ratio(f: VectorLike, K: ArrayLike, a: ArrayLike) -> float:
    """The ratio |sum a_i f(t_i)|^2 / sum_ij a_i a_j K(t_i, t_j).

    Raises:
        DegenerateDirectionError: If a^T K a <= 1e-14 ||a||^2 lambda_1(K)
    """
    k = as_symmetric(K, "K")
    fv = _vector(f, k.shape[0], "f")
    av = _vector(a, k.shape[0], "a")
    denominator = float(av @ k @ av)
    lambda_1 = sym_eigendecomp(k).lambda_1
    if denominator <= DENOMINATOR_TOL * float(av @ av) * lambda_1:
        raise DegenerateDirectionError(
            f"a^T K a = {denominator:.3e} vanishes for this direction"
        )
    return float(fv @ av) ** 2 / denominator


def fortet_norm_sq(f: VectorLike, K: ArrayLike, policy: RankPolicy = DEFAULT_POLICY) -> float:
    """Squared RKHS norm f^T K^- f, the supremum of fortet_ratio on the grid.

    Raises:
        MembershipError: If f is detectably outside Im(K)
    """
    d = sym_eigendecomp(K)
    fv = _vector(f, d.source_dim, "f")
    _require_member(fv, d, policy, "f")
    return float(fv @ moore_penrose(d, policy) @ fv)


def fortet_sup(
    f: VectorLike,
    K: ArrayLike,
    policy: RankPolicy = DEFAULT_POLICY,
    n_samples: int = 100_000,
    seed: int = 0,
    chunk_size: int = 10_000,
) -> float:
    """Random-search supremum of fortet_ratio over unit directions.

    The closed-form maximizer a = K^- f is always included as a candidate, so
    the search attains fortet_norm_sq for f in Im(K). Degenerate directions are
    skipped.
    """
    k = as_symmetric(K, "K")
    fv = _vector(f, k.shape[0], "f")
    d = sym_eigendecomp(k)
    floor = DENOMINATOR_TOL * d.lambda_1
    rng = np.random.default_rng(seed)

    def _best(directions: NDArray[np.float64]) -> float:
        numerators = (directions @ fv) ** 2
        denominators = np.einsum("ij,jk,ik->i", directions, k, directions)
        valid = denominators > floor * np.einsum("ij,ij->i", directions, directions)
        if not np.any(valid):
            return 0.0
        return float(np.max(numerators[valid] / denominators[valid]))

    best = 0.0
    candidate = moore_penrose(d, policy) @ fv
    if np.linalg.norm(candidate) > 0:
        best = _best(candidate[None, :] / np.linalg.norm(candidate))
    remaining = n_samples
    while remaining > 0:
        size = min(chunk_size, remaining)
        directions = rng.standard_normal((size, fv.size))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        best = max(best, _best(directions))
        remaining -= size
    return best


def dominance_trace(K1: ArrayLike, K2: ArrayLike, policy: RankPolicy = DEFAULT_POLICY) -> float:
    """Finite-grid dominance trace tr(K1 K2^-).

    A DominanceWarning is emitted when K2 - K1 is not PSD to tolerance; the
    trace is returned regardless.

    Raises:
        InputError: If the dimensions differ
    """
    k1 = as_symmetric(K1, "K1")
    k2 = as_symmetric(K2, "K2")
    if k1.shape != k2.shape:
        raise InputError(f"dimension mismatch: K1 is {k1.shape}, K2 is {k2.shape}")
    d2 = sym_eigendecomp(k2)
    gap = sym_eigendecomp(k2 - k1).eigenvalues[-1]
    if gap < -PSD_TOL * max(abs(d2.lambda_1), 1.0):
        warnings.warn(
            f"K2 - K1 is not positive semi-definite (smallest eigenvalue {gap:.3e})",
            DominanceWarning,
            stacklevel=2,
        )
    return float(np.sum(k1 * moore_penrose(d2, policy)))


def residual_trace_terms(
    d: SpectralDecomp, K: ArrayLike, policy: RankPolicy = DEFAULT_POLICY
) -> NDArray[np.float64]:
    """Per-eigenpair terms u_j^T K u_j / lambda_j of the residual trace (0 where not retained)."""
    k = as_symmetric(K, "K")
    if k.shape[0] != d.source_dim:
        raise InputError(f"dimension mismatch: R is {d.source_dim}x{d.source_dim}, K is {k.shape}")
    mask = retained_mask(d, policy)
    u = d.eigenvectors
    quad = np.einsum("ij,ik,kj->j", u, k, u)
    terms = np.zeros(d.source_dim)
    terms[mask] = quad[mask] / d.eigenvalues[mask]
    return terms


def _residual_terms(
    R: ArrayLike, K: ArrayLike, policy: RankPolicy
) -> tuple[SpectralDecomp, NDArray[np.float64]]:
    d = sym_eigendecomp(R)
    return d, residual_trace_terms(d, K, policy)


def sweep_from_terms(terms: NDArray[np.float64]) -> NDArray[np.float64]:
    """Residual traces for k = 1..dim from the per-eigenpair terms."""
    tails = np.cumsum(terms[::-1])[::-1]
    return np.append(tails[1:], 0.0)


def residual_trace(
    R: ArrayLike, K: ArrayLike, k: int, policy: RankPolicy = DEFAULT_POLICY
) -> float:
    """Condition diagnostic tr((R^- - R_k^-) K).

    Equals sum over retained j > k of u_j^T K u_j / lambda_j.

    Raises:
        InputError: On dimension mismatch or k outside [1, dim]
    """
    d, terms = _residual_terms(R, K, policy)
    if not (1 <= k <= d.source_dim):
        raise InputError(f"k must lie in [1, {d.source_dim}], got {k}")
    return float(terms[k:].sum())


def residual_trace_sweep(
    R: ArrayLike, K: ArrayLike, policy: RankPolicy = DEFAULT_POLICY
) -> NDArray[np.float64]:
    """residual_trace for every k = 1..dim; entry k-1 holds the value at k."""
    _, terms = _residual_terms(R, K, policy)
    return sweep_from_terms(terms)


def loeve_coefficients(
    f: VectorLike, R: ArrayLike, policy: RankPolicy = DEFAULT_POLICY
) -> NDArray[np.float64]:
    """Coefficients c = R^- f such that the Loeve preimage of f is c^T X.

    Raises:
        MembershipError: If f is detectably outside Im(R)
    """
    d = sym_eigendecomp(R)
    fv = _vector(f, d.source_dim, "f")
    _require_member(fv, d, policy, "f")
    return moore_penrose(d, policy) @ fv


def rkhs_project(
    f: VectorLike, R: ArrayLike, k: int, policy: RankPolicy = DEFAULT_POLICY
) -> NDArray[np.float64]:
    """Coefficients c = R_k^- f of the RKHS projection onto the top-k span.

    The projected function values are R c.
    """
    d = sym_eigendecomp(R)
    fv = _vector(f, d.source_dim, "f")
    return truncated_power(d, k, -1.0, policy) @ fv
