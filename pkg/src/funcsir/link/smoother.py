"""Regression of the response on the estimated indices.

The default link is a Nadaraya-Watson smoother in any number of indices. A
single index may instead use a cubic smoothing spline whose penalty is
chosen by generalized cross-validation.
"""

import logging
import warnings
from dataclasses import dataclass
from typing import Literal, Optional, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.interpolate import BSpline, make_smoothing_spline

from ..base.errors import BandwidthWarning, FallbackWarning, InputError, NumericalError

__all__ = [
    "SPLINE_MIN_POINTS",
    "LinkKind",
    "LinkModel",
    "SmootherModel",
    "SplineModel",
    "fit_smoother",
    "predict_smoother",
    "fit_spline",
    "predict_spline",
    "fit_link",
    "predict_link",
    "prediction_error",
]

logger = logging.getLogger(__name__)

# queries are evaluated in blocks of this many rows
_QUERY_BLOCK = 512

# fewest distinct index values a smoothing spline is fitted to
SPLINE_MIN_POINTS = 5

LinkKind = Literal["nw", "spline"]


@dataclass(frozen=True)
class SmootherModel:
    """Local-constant regressor with a Gaussian product kernel.

    Attributes:
        xi: m x p training indices
        y: m training responses
        bandwidths: p positive per-coordinate bandwidths
    """

    xi: NDArray[np.float64]
    y: NDArray[np.float64]
    bandwidths: NDArray[np.float64]

    @property
    def p(self) -> int:
        return self.xi.shape[1]


def _as_index_matrix(xi: ArrayLike, name: str) -> NDArray[np.float64]:
    arr = np.asarray(xi, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise InputError(f"{name} must be a matrix, got {arr.ndim} dimensions")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} contains non-finite entries")
    return arr


def _training_pair(xi: ArrayLike, y: ArrayLike) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    x = _as_index_matrix(xi, "xi")
    resp = np.asarray(y, dtype=np.float64).reshape(-1)
    m = x.shape[0]
    if m < 2:
        raise InputError(f"the smoother needs at least 2 training points, got {m}")
    if resp.size != m:
        raise InputError(f"{resp.size} responses for {m} training indices")
    if not np.all(np.isfinite(resp)):
        raise InputError("responses contain non-finite entries")
    return x, resp


def fit_smoother(
    xi: ArrayLike, y: ArrayLike, bandwidths: Optional[ArrayLike] = None
) -> SmootherModel:
    """Fit the smoother; bandwidths default to the normal-reference rule.

    The rule is h_j = sd_j * m^(-1/(4+p)) with sd_j the sample standard deviation
    of coordinate j. A zero-variance coordinate gets the floor 1e-8 * (range + 1e-8).

    Raises:
        InputError: If m < 2, the sizes disagree, an entry is not finite or a
            supplied bandwidth is not positive
    """
    x, resp = _training_pair(xi, y)
    m, p = x.shape

    if bandwidths is not None:
        h = np.asarray(bandwidths, dtype=np.float64).reshape(-1)
        if h.size != p or not np.all(h > 0) or not np.all(np.isfinite(h)):
            raise InputError(f"need {p} positive finite bandwidths, got {h.tolist()}")
        return SmootherModel(xi=x, y=resp, bandwidths=h)

    h = x.std(axis=0, ddof=1) * m ** (-1.0 / (4 + p))
    floor = 1e-8 * (np.ptp(x, axis=0) + 1e-8)
    low = h < floor
    if np.any(low):
        warnings.warn(
            f"index coordinates {np.flatnonzero(low).tolist()} have no spread; "
            "bandwidth floored",
            BandwidthWarning,
            stacklevel=2,
        )
        h = np.where(low, floor, h)
    logger.debug(f"smoother bandwidths {h.tolist()} from m={m}")
    return SmootherModel(xi=x, y=resp, bandwidths=h)


def predict_smoother(model: SmootherModel, xi_new: ArrayLike) -> NDArray[np.float64]:
    """Weighted average of the training responses with Gaussian product weights.

    Each prediction is a convex combination of the training responses. A query
    so far away that every weight underflows gets the response of the nearest
    training point in the bandwidth-scaled metric.

    Raises:
        InputError: If xi_new does not have p columns
    """
    q = _as_index_matrix(xi_new, "xi_new")
    if q.shape[1] != model.p:
        raise InputError(f"queries have {q.shape[1]} coordinates, the smoother has {model.p}")

    out = np.empty(q.shape[0])
    fallback = 0
    for start in range(0, q.shape[0], _QUERY_BLOCK):
        block = q[start : start + _QUERY_BLOCK]
        z = (block[:, None, :] - model.xi[None, :, :]) / model.bandwidths
        log_w = -0.5 * np.sum(z * z, axis=2)
        w = np.exp(log_w)
        total = w.sum(axis=1)
        under = total == 0
        safe = np.where(under, 1.0, total)
        out[start : start + block.shape[0]] = np.where(
            under, model.y[np.argmax(log_w, axis=1)], (w @ model.y) / safe
        )
        fallback += int(np.count_nonzero(under))
    if fallback:
        warnings.warn(
            f"all kernel weights underflowed for {fallback} queries; "
            "used the nearest training response",
            FallbackWarning,
            stacklevel=2,
        )
    return out


@dataclass(frozen=True)
class SplineModel:
    """Cubic smoothing spline in a single index.

    Queries outside [lower, upper], the range of the training indices, are
    clamped to the nearest end.
    """

    spline: BSpline
    lower: float
    upper: float

    @property
    def p(self) -> int:
        return 1


def fit_spline(xi: ArrayLike, y: ArrayLike, lam: Optional[float] = None) -> SplineModel:
    """Fit a cubic smoothing spline; lam=None picks the penalty by GCV.

    Tied index values are merged into one knot carrying the mean response,
    weighted by the number of ties, which leaves the penalized least-squares
    objective unchanged.

    Raises:
        InputError: If there is more than one index, fewer than
            SPLINE_MIN_POINTS distinct values, or lam is not positive
        NumericalError: If the spline system cannot be solved
    """
    x, resp = _training_pair(xi, y)
    if x.shape[1] != 1:
        raise InputError(f"the spline link takes a single index, got p={x.shape[1]}")
    if lam is not None and not (np.isfinite(lam) and lam > 0):
        raise InputError(f"lam must be positive, got {lam}")
    knots, inverse, counts = np.unique(x[:, 0], return_inverse=True, return_counts=True)
    if knots.size < SPLINE_MIN_POINTS:
        raise InputError(
            f"the spline link needs at least {SPLINE_MIN_POINTS} distinct index values, got {knots.size}"
        )
    means = np.bincount(inverse.reshape(-1), weights=resp) / counts
    try:
        spline = make_smoothing_spline(knots, means, w=counts.astype(np.float64), lam=lam)
    except (ValueError, np.linalg.LinAlgError) as e:
        raise NumericalError(f"smoothing spline fit failed: {e}") from e
    logger.debug(f"smoothing spline on {knots.size} knots from m={x.shape[0]}")
    return SplineModel(spline=spline, lower=float(knots[0]), upper=float(knots[-1]))


def predict_spline(model: SplineModel, xi_new: ArrayLike) -> NDArray[np.float64]:
    """Evaluate the spline at clamped queries.

    Raises:
        InputError: If xi_new has more than one column
    """
    q = _as_index_matrix(xi_new, "xi_new")
    if q.shape[1] != 1:
        raise InputError(f"queries have {q.shape[1]} coordinates, the spline has 1")
    return np.asarray(model.spline(np.clip(q[:, 0], model.lower, model.upper)), dtype=np.float64)


LinkModel = Union[SmootherModel, SplineModel]


def fit_link(xi: ArrayLike, y: ArrayLike, kind: LinkKind = "nw") -> LinkModel:
    """Fit the link of the given kind with its default tuning."""
    if kind == "nw":
        return fit_smoother(xi, y)
    if kind == "spline":
        return fit_spline(xi, y)
    raise InputError(f"unknown link {kind!r}; expected nw or spline")


def predict_link(model: LinkModel, xi_new: ArrayLike) -> NDArray[np.float64]:
    if isinstance(model, SplineModel):
        return predict_spline(model, xi_new)
    return predict_smoother(model, xi_new)


def prediction_error(y_hat: ArrayLike, y: ArrayLike) -> float:
    """Root-mean-square error {n^-1 sum (y_hat_i - y_i)^2}^(1/2).

    Raises:
        InputError: If the lengths differ or are zero
    """
    a = np.asarray(y_hat, dtype=np.float64).reshape(-1)
    b = np.asarray(y, dtype=np.float64).reshape(-1)
    if a.size != b.size:
        raise InputError(f"length mismatch: {a.size} predictions for {b.size} responses")
    if a.size == 0:
        raise InputError("prediction error of an empty sample is undefined")
    return float(np.sqrt(np.mean((a - b) ** 2)))
