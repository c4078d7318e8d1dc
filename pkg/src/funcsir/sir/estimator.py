"""Sliced inverse regression on a truncated spectral covariance estimate."""

import logging
import warnings
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..base.dataset import Dataset
from ..base.errors import EigengapWarning, InputError, ReducedRankWarning, UndefinedGapError
from ..base.policy import DEFAULT_POLICY, RankPolicy
from ..rkhs.ops import residual_trace_terms, sweep_from_terms
from ..spectral.decomp import SpectralDecomp, as_symmetric, sym_eigendecomp
from ..spectral.ops import cut_has_tie, eigengap, retained_mask, retained_rank, truncated_power
from .slicing import SliceStrategy, SliceSummary, center, make_slices, slice_stats

__all__ = [
    "FitDiagnostics",
    "SirMoments",
    "SirFit",
    "sample_covariance",
    "sir_matrix",
    "variance_explained",
    "variance_rank",
    "prepare",
    "fit_prepared",
    "fit",
    "predict_indices",
]

logger = logging.getLogger(__name__)


def sample_covariance(d: Dataset) -> NDArray[np.float64]:
    """R_hat = (1/n) sum_i x_i x_i^T of a centered dataset (divisor n)."""
    out = d.x.T @ d.x / d.n
    return (out + out.T) / 2.0


def variance_explained(eigenvalues: ArrayLike) -> NDArray[np.float64]:
    """Cumulative share of total variation explained by the leading eigenvalues.

    Negative rounding eigenvalues count as zero.
    """
    lam = np.clip(np.asarray(eigenvalues, dtype=np.float64), 0.0, None)
    total = lam.sum()
    if total <= 0:
        return np.zeros_like(lam)
    return np.cumsum(lam) / total


def variance_rank(profile: ArrayLike, threshold: float = 0.99) -> int:
    """Smallest k whose cumulative variance share reaches threshold."""
    prof = np.asarray(profile, dtype=np.float64)
    hits = np.flatnonzero(prof >= threshold)
    return int(hits[0]) + 1 if hits.size else int(prof.size)


def _inverse_sqrt(
    d: SpectralDecomp, k: int, policy: RankPolicy, notes: List[str]
) -> Tuple[NDArray[np.float64], int]:
    """R_k^{-1/2} of the truncated covariance, lowering k to the numerical rank."""
    if cut_has_tie(d, k, policy):
        message = (
            f"covariance eigenvalues {k} and {k + 1} are tied; "
            "the rank-k truncation is not unique"
        )
        notes.append(message)
        warnings.warn(message, EigengapWarning, stacklevel=3)
    k_eff = int(np.count_nonzero(retained_mask(d, policy)[:k]))
    if k_eff < k:
        message = f"rank k={k} exceeds the numerical rank of the covariance; using k={k_eff}"
        notes.append(message)
        warnings.warn(message, ReducedRankWarning, stacklevel=3)
    return truncated_power(d, k, -0.5, policy, check_tie=False), k_eff


def sir_matrix(
    summary: SliceSummary,
    R_hat: ArrayLike,
    k: int,
    policy: RankPolicy = DEFAULT_POLICY,
) -> NDArray[np.float64]:
    """M = R_k^{-1/2} (sum_s p_s h_s h_s^T) R_k^{-1/2}.

    Raises:
        InputError: If the dimensions disagree or k exceeds J
    """
    r = as_symmetric(R_hat, "R_hat")
    J = r.shape[0]
    if summary.h_hat.shape[1] != J:
        raise InputError(f"slice means have {summary.h_hat.shape[1]} columns, R_hat is {J}x{J}")
    if not (1 <= k <= J):
        raise InputError(f"k must lie in [1, {J}], got {k}")
    w, _ = _inverse_sqrt(sym_eigendecomp(r), k, policy, [])
    m = w @ summary.between_covariance() @ w
    return (m + m.T) / 2.0


@dataclass(frozen=True)
class FitDiagnostics:
    """Technical-condition readouts of a fit.

    Attributes:
        variance_explained: Cumulative variance share of the covariance eigenvalues
        eigengap_ratio: rho_k(R_hat) / J, nan when undefined
        residual_trace: tr((R^- - R_k^-) K_hat) for k = 1..J, with K_hat the
            between-slice covariance
    """

    variance_explained: NDArray[np.float64]
    eigengap_ratio: float
    residual_trace: NDArray[np.float64]


@dataclass(frozen=True)
class SirMoments:
    """The rank-independent part of a fit: centered data, slices and covariance spectrum."""

    centered: Dataset
    x_mean: NDArray[np.float64]
    summary: SliceSummary
    covariance: NDArray[np.float64]
    decomp: SpectralDecomp
    between: NDArray[np.float64]
    policy: RankPolicy = DEFAULT_POLICY


@dataclass(frozen=True)
class SirFit:
    """A fitted functional SIR model.

    Attributes:
        k: Requested truncation rank
        k_effective: Rank actually used (k lowered to the numerical rank)
        S: Number of slices
        p: Number of reported directions
        sir_eigenvalues: All eigenvalues of M, descending
        beta: J x p direction coefficients
        xi_hat: n x p fitted index values (centered x times beta)
        x_mean: Training mean used for centering
        grid: Observation grid
        y: Training responses
        edr_functions: J x p values R_hat beta_j of the estimated RKHS EDR functions
        covariance_eigenvalues: Eigenvalues of R_hat, descending
        diagnostics: Technical-condition readouts, if computed
        notes: Warnings raised while fitting
    """

    k: int
    k_effective: int
    S: int
    p: int
    sir_eigenvalues: NDArray[np.float64]
    beta: NDArray[np.float64]
    xi_hat: NDArray[np.float64]
    x_mean: NDArray[np.float64]
    grid: NDArray[np.float64]
    y: NDArray[np.float64]
    edr_functions: NDArray[np.float64]
    covariance_eigenvalues: NDArray[np.float64]
    diagnostics: Optional[FitDiagnostics] = None
    notes: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def J(self) -> int:
        return self.grid.shape[0]


def prepare(
    d: Dataset,
    S: int = 10,
    policy: RankPolicy = DEFAULT_POLICY,
    strategy: SliceStrategy = "equal_frequency",
) -> SirMoments:
    """Center, slice and decompose the covariance once for any number of ranks.

    Raises:
        InputError: If n <= S
        EmptySliceError: If a slice is empty
    """
    if d.n <= S:
        raise InputError(f"need more observations than slices: n={d.n}, S={S}")
    centered, mean = center(d)
    labels = make_slices(d.y, S, strategy)
    summary = slice_stats(centered, labels, S)
    covariance = sample_covariance(centered)
    return SirMoments(
        centered=centered,
        x_mean=mean,
        summary=summary,
        covariance=covariance,
        decomp=sym_eigendecomp(covariance),
        between=summary.between_covariance(),
        policy=policy,
    )


def fit_prepared(
    moments: SirMoments, k: int, p: Optional[int] = None, diagnostics: bool = True
) -> SirFit:
    """Estimate the EDR directions at rank k from prepared moments.

    Args:
        moments: Output of prepare
        k: Truncation rank, 1 <= k <= J
        p: Number of directions, defaults to min(S - 1, k_effective)
        diagnostics: Whether to compute FitDiagnostics

    Raises:
        InputError: If k is out of range, the covariance is numerically zero or
            p > min(S - 1, k_effective)
    """
    J = moments.decomp.source_dim
    S = moments.summary.S
    policy = moments.policy
    if not (1 <= k <= J):
        raise InputError(f"k must lie in [1, {J}], got {k}")
    if S < 2:
        raise InputError(f"estimating directions needs at least 2 slices, got {S}")
    rank = retained_rank(moments.decomp, policy)
    if rank == 0:
        raise InputError("the covariance has numerical rank 0; there are no directions to estimate")
    p_max = min(S - 1, k, rank)
    if p is None:
        p = p_max
    if not (1 <= p <= p_max):
        raise InputError(
            f"p must lie in [1, min(S - 1, k_effective)] = [1, {p_max}], got {p} "
            f"(covariance numerical rank {rank})"
        )

    notes: List[str] = []
    w, k_eff = _inverse_sqrt(moments.decomp, k, policy, notes)
    m = w @ moments.between @ w
    m_decomp = sym_eigendecomp((m + m.T) / 2.0)
    threshold = policy.threshold(m_decomp.lambda_1)
    for j in range(1, p):
        if m_decomp.eigenvalues[j - 1] > threshold and cut_has_tie(m_decomp, j, policy):
            message = f"SIR eigenvalues {j} and {j + 1} are not distinct; directions are not identified"
            notes.append(message)
            warnings.warn(message, EigengapWarning, stacklevel=2)

    beta = w @ m_decomp.eigenvectors[:, :p]
    xi_hat = moments.centered.x @ beta
    logger.debug(f"fit k={k} (effective {k_eff}), S={S}, p={p}, top eigenvalue {m_decomp.lambda_1:.4g}")

    diag = None
    if diagnostics:
        try:
            gap = eigengap(moments.decomp, k, policy) / J
        except UndefinedGapError:
            gap = float("nan")
        diag = FitDiagnostics(
            variance_explained=variance_explained(moments.decomp.eigenvalues),
            eigengap_ratio=gap,
            residual_trace=sweep_from_terms(
                residual_trace_terms(moments.decomp, moments.between, policy)
            ),
        )

    return SirFit(
        k=k,
        k_effective=k_eff,
        S=S,
        p=p,
        sir_eigenvalues=m_decomp.eigenvalues,
        beta=beta,
        xi_hat=xi_hat,
        x_mean=moments.x_mean,
        grid=moments.centered.grid,
        y=moments.centered.y,
        edr_functions=moments.covariance @ beta,
        covariance_eigenvalues=moments.decomp.eigenvalues,
        diagnostics=diag,
        notes=tuple(notes),
    )


def fit(
    d: Dataset,
    k: int,
    S: int = 10,
    p: Optional[int] = None,
    policy: RankPolicy = DEFAULT_POLICY,
    strategy: SliceStrategy = "equal_frequency",
) -> SirFit:
    """Fit functional SIR: centering, slicing, truncated covariance and the SIR eigenproblem.

    Direction j is beta_j = R_k^{-1/2} v_j with v_j the j-th eigenvector of
    M = R_k^{-1/2} (sum_s p_s h_s h_s^T) R_k^{-1/2}; the fitted indices are
    the centered curves times beta.

    Args:
        d: Training data
        k: Truncation rank of the covariance
        S: Number of slices
        p: Number of directions, defaults to min(S - 1, k_effective)
        policy: Rank policy for the generalized inverse square root
        strategy: Slicing strategy

    Returns:
        SirFit
    """
    return fit_prepared(prepare(d, S, policy, strategy), k, p)


def predict_indices(fit: SirFit, x_new: ArrayLike) -> NDArray[np.float64]:
    """Index values (x_new - x_mean) beta of new curves.

    Raises:
        InputError: If x_new does not have J columns
    """
    x = np.atleast_2d(np.asarray(x_new, dtype=np.float64))
    if x.ndim != 2 or x.shape[1] != fit.J:
        raise InputError(f"new curves must have {fit.J} columns, got shape {x.shape}")
    return (x - fit.x_mean) @ fit.beta
