from .decomp import EIGH_DRIVERS, SYMMETRY_TOL, SpectralDecomp, as_symmetric, sym_eigendecomp
from .ops import (
    PSD_TOL,
    cut_has_tie,
    eigengap,
    generalized_power,
    hs_norm,
    min_eigenvalue,
    moore_penrose,
    retained_mask,
    retained_rank,
    top_k_projection,
    truncate_covariance,
    truncated_power,
)

__all__ = [
    "SpectralDecomp", "as_symmetric", "sym_eigendecomp", "SYMMETRY_TOL", "EIGH_DRIVERS",
    "generalized_power", "moore_penrose", "top_k_projection", "truncated_power",
    "truncate_covariance", "eigengap", "hs_norm", "min_eigenvalue",
    "retained_mask", "retained_rank", "cut_has_tie", "PSD_TOL",
]
