"""CSV files: datasets, index sidecars, kernel matrices and report tables.

A dataset file has the header "t_1,...,t_J,y", where the grid values name the
curve columns, and one row per observation. Reals are written with 17
significant digits so files read back to the same floats.
"""

import logging
import os
import re
import tempfile
from pathlib import Path
from typing import List, Literal, Optional, Tuple, Union

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike, NDArray

from ..base.dataset import Dataset
from ..base.errors import DataError
from ..link.cv import CvReport
from ..sir.diagnostics import DiagnosticsReport

__all__ = [
    "Transform",
    "FLOAT_FORMAT",
    "atomic_write",
    "format_real",
    "to_csv_text",
    "logit10",
    "read_curves",
    "read_dataset",
    "write_dataset",
    "xi_sidecar_path",
    "write_indices",
    "read_table",
    "read_indices",
    "read_kernel_matrix",
    "write_kernel_matrix",
    "write_cv_report",
    "write_diagnostics",
    "write_predictions",
]

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
Transform = Literal["none", "logit10"]

FLOAT_FORMAT = "%.17g"

_LINE_PATTERN = re.compile(r"Expected (\d+) fields in line (\d+), saw (\d+)")


def format_real(value: float) -> str:
    return FLOAT_FORMAT % value


def atomic_write(path: PathLike, text: str) -> None:
    """Write text to path through a temporary file and an atomic rename."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    logger.debug(f"wrote {target}")


def to_csv_text(df: pd.DataFrame) -> str:
    """CSV text with full-precision reals and "nan" for missing values."""
    return df.to_csv(index=False, float_format=FLOAT_FORMAT, na_rep="nan", lineterminator="\n")


def logit10(y: ArrayLike) -> NDArray[np.float64]:
    """log10(y / (1 - y)); callers check that y lies in (0, 1)."""
    v = np.asarray(y, dtype=np.float64)
    return np.log10(v / (1.0 - v))


def _read_cells(source, name: Optional[str] = None) -> Tuple[List[str], pd.DataFrame]:
    """Header and body of a CSV file as strings, rejecting ragged rows."""
    label = name or str(source)
    try:
        raw = pd.read_csv(
            source, header=None, dtype=str, keep_default_na=False, encoding="utf-8"
        )
    except FileNotFoundError as e:
        raise DataError(f"data file not found: {label}") from e
    except pd.errors.EmptyDataError as e:
        raise DataError(f"{label} is empty") from e
    except pd.errors.ParserError as e:
        match = _LINE_PATTERN.search(str(e))
        if match:
            expected, line, seen = (int(g) for g in match.groups())
            raise DataError(
                f"ragged row in {label}: {seen} fields, expected {expected}", row=line - 1
            ) from e
        raise DataError(f"cannot parse {label}: {e}") from e
    header = [str(v).strip() for v in raw.iloc[0].tolist()]
    body = raw.iloc[1:].reset_index(drop=True)
    body.columns = range(len(header))
    missing = body.isna().any(axis=1)
    if missing.any():
        row = int(np.flatnonzero(missing.to_numpy())[0])
        have = int(body.iloc[row].notna().sum())
        raise DataError(
            f"ragged row in {label}: {have} fields, expected {len(header)}", row=row + 1
        )
    return header, body


def _numeric_body(header: List[str], body: pd.DataFrame) -> NDArray[np.float64]:
    cells = np.char.strip(body.to_numpy(dtype=str))
    try:
        # correctly rounded parse, so written files read back bit for bit
        arr = cells.astype(np.float64)
    except ValueError:
        arr = body.apply(lambda col: pd.to_numeric(col.str.strip(), errors="coerce")).to_numpy(
            dtype=np.float64
        )
    bad = ~np.isfinite(arr)
    if bad.any():
        row, col = (int(i) for i in np.argwhere(bad)[0])
        raise DataError(
            f"non-numeric or non-finite cell {body.iat[row, col]!r}",
            row=row + 1,
            column=header[col],
        )
    return arr


def _parse_grid(names: List[str]) -> NDArray[np.float64]:
    grid = np.empty(len(names))
    for j, name in enumerate(names):
        try:
            grid[j] = float(name)
        except ValueError:
            raise DataError(f"grid header {name!r} is not a real number", column=name) from None
        if not np.isfinite(grid[j]):
            raise DataError(f"grid header {name!r} is not finite", column=name)
        if j and grid[j] <= grid[j - 1]:
            raise DataError(
                f"grid is not strictly increasing: {names[j - 1]} then {name}", column=name
            )
    return grid


def _is_real(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def read_curves(
    path: PathLike, transform: Transform = "none"
) -> Tuple[NDArray[np.float64], NDArray[np.float64], Optional[NDArray[np.float64]]]:
    """Read curves and, when present, responses.

    The last column holds responses exactly when its header is not a real
    number.

    Returns:
        grid, n x J curve matrix, responses or None

    Raises:
        DataError: On ragged rows, non-numeric cells, a non-increasing grid or,
            under logit10, responses outside (0, 1)
    """
    header, body = _read_cells(path)
    has_y = not _is_real(header[-1])
    grid_names = header[:-1] if has_y else header
    if not grid_names:
        raise DataError(f"{path} has no curve columns")
    grid = _parse_grid(grid_names)
    if body.shape[0] == 0:
        raise DataError(f"{path} has a header but no observations")
    values = _numeric_body(header, body)
    x = values[:, : grid.size]
    y = values[:, -1] if has_y else None
    if transform == "logit10":
        if y is None:
            raise DataError("logit10 needs a response column", column=header[-1])
        outside = (y <= 0) | (y >= 1)
        if outside.any():
            row = int(np.flatnonzero(outside)[0])
            raise DataError(
                f"response {y[row]!r} outside (0, 1) cannot take logit10",
                row=row + 1,
                column=header[-1],
            )
        y = logit10(y)
    elif transform != "none":
        raise DataError(f"unknown response transform {transform!r}")
    return grid, x, y


def read_dataset(path: PathLike, transform: Transform = "none") -> Dataset:
    """Load a dataset file, applying the response transform.

    Raises:
        DataError: On malformed content, with the row and column located
    """
    grid, x, y = read_curves(path, transform)
    if y is None:
        raise DataError(f"{path} has no response column")
    if x.shape[0] < 2:
        raise DataError(f"{path} has {x.shape[0]} observation; at least 2 are needed")
    logger.info(f"loaded {path}: n={x.shape[0]}, J={grid.size}, transform={transform}")
    return Dataset(grid=grid, x=x, y=y)


def write_dataset(d: Dataset, path: PathLike) -> None:
    columns = [format_real(t) for t in d.grid]
    df = pd.DataFrame(d.x, columns=columns)
    df["y"] = d.y
    atomic_write(path, to_csv_text(df))


def xi_sidecar_path(path: PathLike) -> Path:
    """data.csv -> data.xi.csv"""
    p = Path(path)
    return p.with_name(f"{p.stem}.xi.csv")


def write_indices(xi: ArrayLike, path: PathLike) -> None:
    """Index values, one column xi_j per index."""
    arr = np.asarray(xi, dtype=np.float64)
    arr = arr.reshape(arr.shape[0], -1)
    df = pd.DataFrame(arr, columns=[f"xi_{j + 1}" for j in range(arr.shape[1])])
    atomic_write(path, to_csv_text(df))


def read_table(source, name: Optional[str] = None) -> Tuple[List[str], NDArray[np.float64]]:
    """Header and values of an all-numeric table; source is a path or a text buffer."""
    header, body = _read_cells(source, name)
    return header, _numeric_body(header, body)


def read_indices(path: PathLike) -> NDArray[np.float64]:
    return read_table(path)[1]


def read_kernel_matrix(path: PathLike) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Read a tabulated kernel with header "t,t_1,...,t_J" and rows "t_i,K(t_i, t_1),...".

    Raises:
        DataError: If the row labels do not repeat the header grid
    """
    header, body = _read_cells(path)
    grid = _parse_grid(header[1:])
    values = _numeric_body(header, body)
    if values.shape[0] != grid.size or not np.array_equal(values[:, 0], grid):
        raise DataError(f"row labels of {path} do not match the header grid", column=header[0])
    return grid, values[:, 1:]


def write_kernel_matrix(grid: ArrayLike, matrix: ArrayLike, path: PathLike) -> None:
    g = np.asarray(grid, dtype=np.float64)
    df = pd.DataFrame(np.asarray(matrix, dtype=np.float64), columns=[format_real(t) for t in g])
    df.insert(0, "t", g)
    atomic_write(path, to_csv_text(df))


def write_cv_report(report: CvReport, path: PathLike) -> None:
    """One row per candidate: k, CV(k), its standard error and the feasibility note."""
    df = pd.DataFrame(
        {
            "k": report.k_grid,
            "cv": report.cv_values,
            "cv_se": report.cv_se,
            "note": [note or "" for note in report.notes],
        }
    )
    atomic_write(path, to_csv_text(df))


def write_diagnostics(report: DiagnosticsReport, path: PathLike) -> None:
    """Plot-ready long table with columns series, x, y."""
    atomic_write(path, to_csv_text(report.to_frame()))


def write_predictions(
    y_hat: ArrayLike, xi: ArrayLike, path: PathLike, y: Optional[ArrayLike] = None
) -> None:
    xi_arr = np.asarray(xi, dtype=np.float64)
    df = pd.DataFrame({"y_hat": np.asarray(y_hat, dtype=np.float64)})
    for j in range(xi_arr.shape[1]):
        df[f"xi_{j + 1}"] = xi_arr[:, j]
    if y is not None:
        df["y"] = np.asarray(y, dtype=np.float64)
    atomic_write(path, to_csv_text(df))
