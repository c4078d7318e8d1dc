import warnings
from dataclasses import dataclass
from typing import List, Literal, Optional, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, field_validator

from ..base.dataset import Dataset
from ..base.errors import DegenerateResponseWarning, EmptySliceError, InputError

__all__ = [
    "FixedBoundaries",
    "SliceStrategy",
    "SliceSummary",
    "center",
    "make_slices",
    "slice_stats",
]


class FixedBoundaries(BaseModel):
    """Slices delimited by fixed interior cut points.

    Slice s holds the responses in [cuts[s-1], cuts[s]), the outer slices are
    unbounded, so S = len(cuts) + 1 slices partition the real line.
    """

    model_config = ConfigDict(frozen=True)

    cuts: List[float]

    @field_validator("cuts")
    @classmethod
    def _increasing(cls, cuts: List[float]) -> List[float]:
        if any(b <= a for a, b in zip(cuts, cuts[1:])):
            raise ValueError("cut points must be strictly increasing")
        return cuts


SliceStrategy = Union[Literal["equal_frequency"], FixedBoundaries]


@dataclass(frozen=True)
class SliceSummary:
    """Per-slice proportions and mean curves.

    Attributes:
        labels: Slice index of each observation
        counts: Number of observations per slice
        p_hat: counts / n
        h_hat: S x J matrix of slice means
    """

    labels: NDArray[np.intp]
    counts: NDArray[np.int64]
    p_hat: NDArray[np.float64]
    h_hat: NDArray[np.float64]

    @property
    def S(self) -> int:
        return self.counts.shape[0]

    def between_covariance(self) -> NDArray[np.float64]:
        """sum_s p_s h_s h_s^T, the sliced estimate of the inverse regression covariance."""
        out = (self.h_hat.T * self.p_hat) @ self.h_hat
        return (out + out.T) / 2.0


def center(d: Dataset) -> Tuple[Dataset, NDArray[np.float64]]:
    """Subtract the column means of x.

    Returns:
        The centered dataset and the mean vector used
    """
    mean = d.x.mean(axis=0)
    return Dataset(grid=d.grid, x=d.x - mean, y=d.y), mean


def make_slices(
    y: ArrayLike, S: int, strategy: SliceStrategy = "equal_frequency"
) -> NDArray[np.intp]:
    """Assign each response to one of S slices.

    Equal-frequency slicing sorts the responses (ties kept in order of
    appearance) and cuts the order into S runs whose sizes differ by at most 1.

    Args:
        y: Responses
        S: Number of slices
        strategy: "equal_frequency" or FixedBoundaries with S - 1 cut points

    Returns:
        Slice index in 0..S-1 for each observation

    Raises:
        InputError: If S < 1, S > n, or the cut count does not match S
        EmptySliceError: If a fixed-boundary slice receives no observation
    """
    values = np.asarray(y, dtype=np.float64).reshape(-1)
    n = values.size
    if S < 1:
        raise InputError(f"number of slices must be positive, got {S}")
    if S > n:
        raise InputError(f"cannot form {S} slices from {n} observations")

    labels = np.empty(n, dtype=np.intp)
    if isinstance(strategy, FixedBoundaries):
        if len(strategy.cuts) != S - 1:
            raise InputError(f"{S} slices need {S - 1} cut points, got {len(strategy.cuts)}")
        labels[:] = np.searchsorted(np.asarray(strategy.cuts), values, side="right")
        counts = np.bincount(labels, minlength=S)
        empty = np.flatnonzero(counts == 0)
        if empty.size:
            raise EmptySliceError(
                f"slice {int(empty[0])} of {S} is empty; every slice needs a positive proportion"
            )
        return labels

    if strategy != "equal_frequency":
        raise InputError(f"unknown slicing strategy {strategy!r}")
    order = np.argsort(values, kind="stable")
    runs = np.array_split(order, S)
    for s, run in enumerate(runs):
        labels[run] = s
    straddling = [
        s for s in range(S - 1) if values[runs[s][-1]] == values[runs[s + 1][0]]
    ]
    if straddling:
        warnings.warn(
            f"tied responses straddle {len(straddling)} slice boundaries; "
            "ties were split in order of appearance",
            DegenerateResponseWarning,
            stacklevel=2,
        )
    return labels


def slice_stats(d: Dataset, labels: ArrayLike, S: Optional[int] = None) -> SliceSummary:
    """Slice proportions and mean curves of a centered dataset.

    Raises:
        InputError: If labels do not match the dataset
        EmptySliceError: If a slice has no observation
    """
    lab = np.asarray(labels, dtype=np.intp).reshape(-1)
    if lab.size != d.n:
        raise InputError(f"{lab.size} slice labels for {d.n} observations")
    if lab.min() < 0:
        raise InputError("slice labels must be nonnegative")
    n_slices = int(lab.max()) + 1 if S is None else S
    counts = np.bincount(lab, minlength=n_slices)
    if counts.size != n_slices:
        raise InputError(f"labels reference slice {counts.size - 1} but S = {n_slices}")
    empty = np.flatnonzero(counts == 0)
    if empty.size:
        raise EmptySliceError(f"slice {int(empty[0])} of {n_slices} is empty")

    sums = np.zeros((n_slices, d.J))
    np.add.at(sums, lab, d.x)
    return SliceSummary(
        labels=lab,
        counts=counts,
        p_hat=counts / d.n,
        h_hat=sums / counts[:, None],
    )
