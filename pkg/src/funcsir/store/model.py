"""The fit file: a SirFit serialized as a sequence of titled CSV sections."""

import io
import logging
import re
from dataclasses import dataclass, field
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Dict, List, Union

import numpy as np
import pandas as pd

from ..base.errors import DataError
from ..sir.estimator import FitDiagnostics, SirFit
from .csv import atomic_write, read_table, to_csv_text

__all__ = ["FIT_FORMAT", "FitFile", "write_fit", "read_fit"]

logger = logging.getLogger(__name__)

FIT_FORMAT = "funcsir-fit/1"

_SECTION = re.compile(r"^\[(\w+)\]\s*$")

PathLike = Union[str, Path]


def _package_version(name: str) -> str:
    try:
        return version(name)
    except PackageNotFoundError:
        return "unknown"


@dataclass(frozen=True)
class FitFile:
    """A fit with the run metadata stored next to it.

    Attributes:
        fit: The fitted model
        seed: Seed recorded by the command that produced the fit
        metadata: All metadata entries as strings, versions included
    """

    fit: SirFit
    seed: int = 0
    metadata: Dict[str, str] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.fit.xi_hat.shape[0]


def _columns(prefix: str, p: int) -> List[str]:
    return [f"{prefix}_{j + 1}" for j in range(p)]


def _sections(fit: SirFit, seed: int) -> Dict[str, pd.DataFrame]:
    metadata = {
        "format": FIT_FORMAT,
        "n": fit.xi_hat.shape[0],
        "J": fit.J,
        "S": fit.S,
        "k": fit.k,
        "k_effective": fit.k_effective,
        "p": fit.p,
        "seed": seed,
        "funcsir_version": _package_version("funcsir"),
        "numpy_version": np.__version__,
    }
    sections = {
        "metadata": pd.DataFrame({"key": list(metadata), "value": [str(v) for v in metadata.values()]}),
        "covariance_eigenvalues": pd.DataFrame(
            {"j": np.arange(1, fit.covariance_eigenvalues.size + 1), "eigenvalue": fit.covariance_eigenvalues}
        ),
        "sir_eigenvalues": pd.DataFrame(
            {"j": np.arange(1, fit.sir_eigenvalues.size + 1), "eigenvalue": fit.sir_eigenvalues}
        ),
        "beta": pd.DataFrame(fit.beta, columns=_columns("beta", fit.p)),
        "x_mean": pd.DataFrame({"t": fit.grid, "x_mean": fit.x_mean}),
        "edr_functions": pd.DataFrame(fit.edr_functions, columns=_columns("edr", fit.p)),
        "xi_hat": pd.DataFrame(fit.xi_hat, columns=_columns("xi", fit.p)),
    }
    sections["beta"].insert(0, "t", fit.grid)
    sections["edr_functions"].insert(0, "t", fit.grid)
    sections["xi_hat"].insert(0, "y", fit.y)
    if fit.diagnostics is not None:
        diag = fit.diagnostics
        ks = np.arange(1, diag.residual_trace.size + 1)
        sections["diagnostics"] = pd.concat(
            [
                pd.DataFrame({"series": "variance_explained", "x": np.arange(1, diag.variance_explained.size + 1), "y": diag.variance_explained}),
                pd.DataFrame({"series": "residual_trace", "x": ks, "y": diag.residual_trace}),
                pd.DataFrame({"series": ["eigengap_ratio"], "x": [fit.k], "y": [diag.eigengap_ratio]}),
            ],
            ignore_index=True,
        )
    if fit.notes:
        sections["notes"] = pd.DataFrame({"note": list(fit.notes)})
    return sections


def write_fit(fit: SirFit, path: PathLike, seed: int = 0) -> None:
    """Write the fit file atomically; reals keep 17 significant digits."""
    parts = [f"[{name}]\n{to_csv_text(df)}" for name, df in _sections(fit, seed).items()]
    atomic_write(path, "\n".join(parts))
    logger.info(f"wrote fit k={fit.k}, p={fit.p} to {path}")


def _split_sections(text: str, path: PathLike) -> Dict[str, str]:
    sections: Dict[str, List[str]] = {}
    current = None
    for line in text.splitlines():
        match = _SECTION.match(line)
        if match:
            current = match.group(1)
            sections[current] = []
        elif current is not None:
            if line.strip():
                sections[current].append(line)
        elif line.strip():
            raise DataError(f"{path} does not start with a [section] title")
    return {name: "\n".join(lines) + "\n" for name, lines in sections.items()}


def read_fit(path: PathLike) -> FitFile:
    """Read a fit file written by write_fit.

    Raises:
        DataError: If a section is missing or malformed
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError as e:
        raise DataError(f"fit file not found: {path}") from e
    raw = _split_sections(text, path)
    for required in ("metadata", "covariance_eigenvalues", "sir_eigenvalues", "beta", "x_mean", "edr_functions", "xi_hat"):
        if required not in raw:
            raise DataError(f"{path} lacks the [{required}] section")

    meta_df = pd.read_csv(io.StringIO(raw["metadata"]), dtype=str, keep_default_na=False)
    metadata = dict(zip(meta_df["key"], meta_df["value"]))
    if metadata.get("format") != FIT_FORMAT:
        raise DataError(f"{path} is not a {FIT_FORMAT} file", column="format")
    try:
        k, k_eff, S, p, seed = (int(metadata[key]) for key in ("k", "k_effective", "S", "p", "seed"))
    except (KeyError, ValueError) as e:
        raise DataError(f"{path} has incomplete metadata: {e}") from e

    def table(name: str) -> np.ndarray:
        return read_table(io.StringIO(raw[name]), name=f"{path} [{name}]")[1]

    beta = table("beta")
    xi = table("xi_hat")
    diagnostics = None
    if "diagnostics" in raw:
        diag = pd.read_csv(io.StringIO(raw["diagnostics"]), float_precision="round_trip")
        by_series = {name: group["y"].to_numpy(dtype=np.float64) for name, group in diag.groupby("series", sort=False)}
        diagnostics = FitDiagnostics(
            variance_explained=by_series["variance_explained"],
            eigengap_ratio=float(by_series["eigengap_ratio"][0]),
            residual_trace=by_series["residual_trace"],
        )
    notes: tuple = ()
    if "notes" in raw:
        notes = tuple(pd.read_csv(io.StringIO(raw["notes"]), dtype=str, keep_default_na=False)["note"])

    fit = SirFit(
        k=k,
        k_effective=k_eff,
        S=S,
        p=p,
        sir_eigenvalues=table("sir_eigenvalues")[:, 1],
        beta=beta[:, 1:],
        xi_hat=xi[:, 1:],
        x_mean=table("x_mean")[:, 1],
        grid=beta[:, 0],
        y=xi[:, 0],
        edr_functions=table("edr_functions")[:, 1:],
        covariance_eigenvalues=table("covariance_eigenvalues")[:, 1],
        diagnostics=diagnostics,
        notes=notes,
    )
    if fit.beta.shape[1] != p:
        raise DataError(f"{path}: beta has {fit.beta.shape[1]} columns, metadata says p={p}", column="p")
    return FitFile(fit=fit, seed=seed, metadata=metadata)
