from .csv import (
    FLOAT_FORMAT,
    Transform,
    atomic_write,
    format_real,
    logit10,
    read_curves,
    read_dataset,
    read_indices,
    read_kernel_matrix,
    read_table,
    to_csv_text,
    write_cv_report,
    write_dataset,
    write_diagnostics,
    write_indices,
    write_kernel_matrix,
    write_predictions,
    xi_sidecar_path,
)
from .model import FIT_FORMAT, FitFile, read_fit, write_fit

__all__ = [
    "Transform", "FLOAT_FORMAT", "atomic_write", "format_real", "to_csv_text", "logit10",
    "read_curves", "read_dataset", "write_dataset", "xi_sidecar_path", "write_indices",
    "read_table", "read_indices", "read_kernel_matrix", "write_kernel_matrix",
    "write_cv_report", "write_diagnostics", "write_predictions",
    "FIT_FORMAT", "FitFile", "write_fit", "read_fit",
]
