from .diagnostics import DiagnosticsReport, diagnose, eigengap_ratios, scaling_table
from .estimator import (
    FitDiagnostics,
    SirFit,
    SirMoments,
    fit,
    fit_prepared,
    predict_indices,
    prepare,
    sample_covariance,
    sir_matrix,
    variance_explained,
    variance_rank,
)
from .slicing import (
    FixedBoundaries,
    SliceStrategy,
    SliceSummary,
    center,
    make_slices,
    slice_stats,
)

__all__ = [
    "FixedBoundaries", "SliceStrategy", "SliceSummary", "center", "make_slices", "slice_stats",
    "FitDiagnostics", "SirFit", "SirMoments", "sample_covariance", "sir_matrix",
    "variance_explained", "variance_rank", "prepare", "fit_prepared", "fit", "predict_indices",
    "DiagnosticsReport", "diagnose", "eigengap_ratios", "scaling_table",
]
