import logging
from pathlib import Path
from typing import Callable, Dict

import numpy as np

from ..base.dataset import Dataset
from ..base.errors import DataError
from ..link.cv import cv_select_k
from ..link.smoother import fit_link, predict_link, prediction_error
from ..simgen.designs import simulate
from ..sir.diagnostics import diagnose
from ..sir.estimator import fit, predict_indices, variance_explained
from ..store.csv import (
    read_curves,
    read_dataset,
    write_cv_report,
    write_dataset,
    write_diagnostics,
    write_indices,
    write_predictions,
    xi_sidecar_path,
)
from ..store.model import read_fit, write_fit
from .config import RunConfig
from .templates import render

__all__ = ["cmd_simulate", "cmd_fit", "cmd_cv", "cmd_predict", "cmd_diagnose", "COMMANDS"]

logger = logging.getLogger(__name__)

# rows of the eigenvalue table printed by fit
_EIGEN_ROWS = 10


def _load(config: RunConfig) -> Dataset:
    d = read_dataset(config.data, config.transform)
    if config.train_rows is not None:
        if config.train_rows > d.n:
            raise DataError(f"--train-rows {config.train_rows} exceeds the {d.n} rows of {config.data}")
        d = d.take(np.arange(config.train_rows))
        logger.info(f"using the first {d.n} rows for training")
    return d


def cmd_simulate(config: RunConfig) -> str:
    """Write a simulated dataset and its true-index sidecar.

    The sidecar is written first and removed again if the dataset write
    fails, so a dataset on disk always has its sidecar.
    """
    output = simulate(config.sim_config())
    xi_path = xi_sidecar_path(config.out)
    write_indices(output.xi_true, xi_path)
    try:
        write_dataset(output.dataset, config.out)
    except BaseException:
        Path(xi_path).unlink(missing_ok=True)
        raise
    logger.info(f"wrote {config.out} and {xi_path}")
    return render(
        "simulate",
        config=config,
        n=output.dataset.n,
        J=output.dataset.J,
        data_path=config.out,
        xi_path=xi_path,
        config_json=config.model_dump_json(),
    )


def cmd_fit(config: RunConfig) -> str:
    """Fit at rank --rank and write the fit file."""
    d = _load(config)
    fitted = fit(d, config.rank, S=config.slices, p=config.dirs, policy=config.policy)
    write_fit(fitted, config.out, seed=config.seed)
    lam = fitted.covariance_eigenvalues
    cumulative = variance_explained(lam)
    rows = [
        {"j": j + 1, "value": float(lam[j]), "cumulative": float(cumulative[j])}
        for j in range(min(_EIGEN_ROWS, lam.size))
    ]
    return render(
        "fit",
        fit=fitted,
        n=d.n,
        covariance=rows,
        sir=[float(v) for v in fitted.sir_eigenvalues[: fitted.p]],
        out=config.out,
    )


def cmd_cv(config: RunConfig) -> str:
    """Select the rank by cross-validation over --rank-grid."""
    d = _load(config)
    report = cv_select_k(
        d,
        S=config.slices,
        p=config.dirs,
        k_grid=config.rank_grid,
        scheme=config.scheme,
        seed=config.seed,
        policy=config.policy,
        max_workers=config.workers,
        link=config.link,
    )
    if config.out:
        write_cv_report(report, config.out)
    rows = [
        {"k": k, "cv": cv, "se": se, "note": note}
        for k, cv, se, note in zip(report.k_grid, report.cv_values, report.cv_se, report.notes)
    ]
    return render("cv", report=report, rows=rows, out=config.out)


def cmd_predict(config: RunConfig) -> str:
    """Predict responses of new curves from a fit file.

    With --train-rows m the rows after the first m are predicted.
    """
    stored = read_fit(config.fit).fit
    grid, x, y = read_curves(config.data, config.transform)
    if grid.size != stored.J or not np.allclose(grid, stored.grid, rtol=1e-12, atol=0.0):
        raise DataError(f"grid of {config.data} differs from the grid of the fit", column="grid")
    if config.train_rows is not None:
        if config.train_rows >= x.shape[0]:
            raise DataError(f"--train-rows {config.train_rows} leaves no rows of {config.data} to predict")
        x = x[config.train_rows :]
        y = None if y is None else y[config.train_rows :]
    xi_new = predict_indices(stored, x)
    y_hat = predict_link(fit_link(stored.xi_hat, stored.y, config.link), xi_new)
    rmse = None if y is None else prediction_error(y_hat, y)
    if config.out:
        write_predictions(y_hat, xi_new, config.out, y)
    return render("predict", q=x.shape[0], fit=stored, rmse=rmse, out=config.out)


def cmd_diagnose(config: RunConfig) -> str:
    """Residual trace, eigengap and eigenvalue scaling diagnostics."""
    d = _load(config)
    report = diagnose(
        d,
        k_max=min(config.k_max, d.J),
        S=config.slices,
        policy=config.policy,
        brownian=config.brownian,
    )
    if config.out:
        write_diagnostics(report, config.out)
    rows = [
        {"k": k + 1, "trace": float(t), "gap": float(g)}
        for k, (t, g) in enumerate(zip(report.residual_trace, report.eigengap_ratio))
    ]
    scaling = [] if report.scaling is None else report.scaling.to_dict("records")
    return render("diagnose", report=report, rows=rows, scaling=scaling, out=config.out)


COMMANDS: Dict[str, Callable[[RunConfig], str]] = {
    "simulate": cmd_simulate,
    "fit": cmd_fit,
    "cv": cmd_cv,
    "predict": cmd_predict,
    "diagnose": cmd_diagnose,
}
