from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike, NDArray

from ..base.dataset import Dataset
from ..base.errors import InputError, UndefinedGapError
from ..base.policy import DEFAULT_POLICY, RankPolicy
from ..rkhs.ops import residual_trace_terms, sweep_from_terms
from ..simgen.designs import bm_eigenvalue
from ..spectral.decomp import SpectralDecomp
from ..spectral.ops import eigengap
from .estimator import prepare, variance_explained, variance_rank
from .slicing import SliceStrategy

__all__ = ["DiagnosticsReport", "eigengap_ratios", "scaling_table", "diagnose"]


def eigengap_ratios(
    d: SpectralDecomp, k_max: int, policy: RankPolicy = DEFAULT_POLICY
) -> NDArray[np.float64]:
    """rho_m / J for m = 1..k_max, nan where the gap is undefined."""
    out = np.full(k_max, np.nan)
    for m in range(1, k_max + 1):
        try:
            out[m - 1] = eigengap(d, m, policy) / d.source_dim
        except UndefinedGapError:
            pass
    return out


def scaling_table(eigenvalues: ArrayLike, j_max: int) -> pd.DataFrame:
    """Compare lambda_j(R_J) / J with the Brownian operator eigenvalues.

    Returns:
        DataFrame with columns j, scaled, brownian, rel_error
    """
    lam = np.asarray(eigenvalues, dtype=np.float64)
    J = lam.size
    j = np.arange(1, min(j_max, J) + 1)
    scaled = lam[: j.size] / J
    reference = np.array([bm_eigenvalue(int(i)) for i in j])
    return pd.DataFrame(
        {
            "j": j,
            "scaled": scaled,
            "brownian": reference,
            "rel_error": np.abs(scaled - reference) / reference,
        }
    )


@dataclass(frozen=True)
class DiagnosticsReport:
    """Technical-condition diagnostics of a dataset.

    Attributes:
        J: Grid size
        covariance_eigenvalues: Eigenvalues of R_hat, descending
        variance_explained: Cumulative variance share
        suggested_rank: Smallest k explaining at least 99% of the variation
        residual_trace: tr((R^- - R_k^-) K_hat), k = 1..k_max
        eigengap_ratio: rho_m(R_hat) / J, m = 1..k_max
        scaling: Eigenvalue scaling table, when a Brownian design is asserted
    """

    J: int
    covariance_eigenvalues: NDArray[np.float64]
    variance_explained: NDArray[np.float64]
    suggested_rank: int
    residual_trace: NDArray[np.float64]
    eigengap_ratio: NDArray[np.float64]
    scaling: Optional[pd.DataFrame] = None

    def to_frame(self) -> pd.DataFrame:
        """Plot-ready long table with columns series, x, y."""
        k_max = self.residual_trace.size
        ks = np.arange(1, k_max + 1)
        parts = [
            pd.DataFrame({"series": "residual_trace", "x": ks, "y": self.residual_trace}),
            pd.DataFrame({"series": "eigengap_ratio", "x": ks, "y": self.eigengap_ratio}),
            pd.DataFrame(
                {
                    "series": "variance_explained",
                    "x": np.arange(1, self.variance_explained.size + 1),
                    "y": self.variance_explained,
                }
            ),
        ]
        if self.scaling is not None:
            parts.append(
                pd.DataFrame({"series": "scaled_eigenvalue", "x": self.scaling["j"], "y": self.scaling["scaled"]})
            )
            parts.append(
                pd.DataFrame({"series": "brownian_eigenvalue", "x": self.scaling["j"], "y": self.scaling["brownian"]})
            )
        return pd.concat(parts, ignore_index=True)


def diagnose(
    d: Dataset,
    k_max: int = 10,
    S: int = 10,
    policy: RankPolicy = DEFAULT_POLICY,
    brownian: bool = False,
    strategy: SliceStrategy = "equal_frequency",
) -> DiagnosticsReport:
    """Compute the k-sweep diagnostics of a dataset.

    The inverse regression covariance is estimated by the between-slice
    covariance sum_s p_s h_s h_s^T.

    Raises:
        InputError: If k_max is outside [1, J]
    """
    if not (1 <= k_max <= d.J):
        raise InputError(f"k_max must lie in [1, {d.J}], got {k_max}")
    moments = prepare(d, S, policy, strategy)
    profile = variance_explained(moments.decomp.eigenvalues)
    sweep = sweep_from_terms(residual_trace_terms(moments.decomp, moments.between, policy))
    return DiagnosticsReport(
        J=d.J,
        covariance_eigenvalues=moments.decomp.eigenvalues,
        variance_explained=profile,
        suggested_rank=variance_rank(profile),
        residual_trace=sweep[:k_max],
        eigengap_ratio=eigengap_ratios(moments.decomp, k_max, policy),
        scaling=scaling_table(moments.decomp.eigenvalues, k_max) if brownian else None,
    )
