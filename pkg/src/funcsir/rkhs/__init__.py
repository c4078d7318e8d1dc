from .kernels import BrownianKernel, FBMKernel, KernelSpec, TabulatedKernel, gram_matrix
from .ops import (
    RANGE_TOL,
    dominance_trace,
    fortet_norm_sq,
    fortet_ratio,
    fortet_sup,
    loeve_coefficients,
    range_residual,
    residual_trace,
    residual_trace_sweep,
    residual_trace_terms,
    sweep_from_terms,
    rkhs_inner,
    rkhs_project,
)

__all__ = [
    "KernelSpec", "BrownianKernel", "FBMKernel", "TabulatedKernel", "gram_matrix",
    "RANGE_TOL", "range_residual", "rkhs_inner", "fortet_ratio", "fortet_norm_sq",
    "fortet_sup", "dominance_trace", "residual_trace", "residual_trace_sweep",
    "residual_trace_terms", "sweep_from_terms",
    "loeve_coefficients", "rkhs_project",
]
