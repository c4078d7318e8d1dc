"""Cross-validated choice of the truncation rank k."""

import logging
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator
from sklearn.model_selection import LeaveOneOut, train_test_split
from tqdm import tqdm  # type: ignore

from ..base.dataset import Dataset
from ..base.errors import EmptySliceError, InputError
from ..base.policy import DEFAULT_POLICY, RankPolicy
from ..sir.estimator import fit_prepared, predict_indices, prepare, sample_covariance
from ..sir.slicing import SliceStrategy, center
from ..spectral.decomp import sym_eigendecomp
from ..spectral.ops import retained_rank
from .smoother import LinkKind, fit_link, predict_link

__all__ = ["CvScheme", "CvReport", "make_folds", "cv_select_k", "LOO_MAX_N"]

logger = logging.getLogger(__name__)

# largest sample size for which the default scheme is leave-one-out
LOO_MAX_N = 200

Fold = Tuple[NDArray[np.intp], NDArray[np.intp]]


class CvScheme(BaseModel):
    """How held-out responses are produced.

    kind="loo" leaves each observation out in turn, "holdout" holds out a seeded
    random test_fraction of the sample, "split" trains on the first n_train rows
    and tests on the rest.
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["loo", "holdout", "split"] = "loo"
    test_fraction: float = Field(default=0.3, gt=0, lt=1)
    n_train: Optional[int] = Field(default=None, ge=2)

    @model_validator(mode="after")
    def _split_needs_size(self) -> "CvScheme":
        if self.kind == "split" and self.n_train is None:
            raise ValueError("the split scheme needs n_train")
        return self

    @classmethod
    def default_for(cls, n: int) -> "CvScheme":
        """Leave-one-out up to LOO_MAX_N observations, a 70/30 holdout above."""
        if n <= LOO_MAX_N:
            return cls(kind="loo")
        return cls(kind="holdout", test_fraction=0.3)

    @classmethod
    def parse(cls, text: str) -> "CvScheme":
        """Read "loo", "holdout:<fraction>" or "split:<n_train>".

        Raises:
            InputError: If the text is not one of these forms
        """
        kind, _, arg = text.strip().partition(":")
        try:
            if kind == "loo" and not arg:
                return cls(kind="loo")
            if kind == "holdout":
                return cls(kind="holdout", test_fraction=float(arg) if arg else 0.3)
            if kind == "split" and arg:
                return cls(kind="split", n_train=int(arg))
        except ValueError as e:
            raise InputError(f"invalid CV scheme {text!r}: {e}") from e
        raise InputError(f"invalid CV scheme {text!r}; expected loo, holdout:<frac> or split:<m>")

    def __str__(self) -> str:
        if self.kind == "holdout":
            return f"holdout:{self.test_fraction}"
        if self.kind == "split":
            return f"split:{self.n_train}"
        return "loo"


class CvReport(BaseModel):
    """Outcome of a rank selection run.

    cv_values[i] is CV(k_grid[i]), the sum of squared held-out prediction
    errors, or nan when the candidate was infeasible. cv_se[i] is the standard
    error of CV(k_grid[i]) - CV(k_star) over held-out units. link names the
    regressor of the response on the fitted indices.
    """

    k_grid: List[int]
    cv_values: List[float]
    cv_se: List[float]
    k_star: int
    scheme: CvScheme
    seed: int
    notes: List[Optional[str]]
    n_folds: int
    folds_skipped: int = 0
    n_held_out: int
    significant: bool
    link: LinkKind = "nw"

    @property
    def feasible(self) -> List[int]:
        return [k for k, v in zip(self.k_grid, self.cv_values) if np.isfinite(v)]


def make_folds(n: int, scheme: CvScheme, seed: int = 0) -> List[Fold]:
    """Training and test row indices of every fold.

    Raises:
        InputError: If the scheme leaves no training or no test rows
    """
    rows = np.arange(n, dtype=np.intp)
    if scheme.kind == "loo":
        return [(rows[train], rows[test]) for train, test in LeaveOneOut().split(rows)]
    if scheme.kind == "split":
        m = scheme.n_train or 0
        if m >= n:
            raise InputError(f"split:{m} leaves no test rows out of {n}")
        train, test = train_test_split(rows, train_size=m, shuffle=False)
        return [(train, test)]
    n_test = int(round(scheme.test_fraction * n))
    if not (1 <= n_test < n):
        raise InputError(f"holdout fraction {scheme.test_fraction} of n={n} gives {n_test} test rows")
    train, test = train_test_split(rows, test_size=n_test, random_state=seed % 2**32)
    return [(np.sort(train), np.sort(test))]


def _check_candidates(
    k_grid: Sequence[int], J: int, S: int, p: int, rank: int
) -> Tuple[List[int], List[Optional[str]]]:
    feasible, notes = [], []
    for k in k_grid:
        if not (1 <= k <= J):
            notes.append(f"infeasible: k={k} outside [1, {J}]")
        elif p > min(S - 1, k):
            notes.append(f"infeasible: p={p} exceeds min(S - 1, k) = {min(S - 1, k)}")
        elif p > rank:
            notes.append(f"infeasible: p={p} exceeds the covariance numerical rank {rank}")
        else:
            feasible.append(k)
            notes.append(None)
    return feasible, notes


def _run_fold(
    d: Dataset,
    fold: Fold,
    S: int,
    p: int,
    ks: List[int],
    policy: RankPolicy,
    strategy: SliceStrategy,
    link: LinkKind,
) -> Optional[Dict[int, NDArray[np.float64]]]:
    """Squared held-out errors per rank, or None when the fold cannot be sliced.

    Ranks whose fit would need more directions than the fold's covariance
    rank are left out of the result.
    """
    train_rows, test_rows = fold
    train, test = d.take(train_rows), d.x[test_rows]
    started = time.perf_counter()
    try:
        moments = prepare(train, S, policy, strategy)
    except EmptySliceError as e:
        logger.info(f"fold skipped: {e}")
        return None
    rank = retained_rank(moments.decomp, policy)
    out = {}
    for k in ks:
        if p > min(k, rank):
            continue
        fitted = fit_prepared(moments, k, p, diagnostics=False)
        model = fit_link(fitted.xi_hat, train.y, link)
        y_hat = predict_link(model, predict_indices(fitted, test))
        out[k] = (y_hat - d.y[test_rows]) ** 2
    logger.debug(
        f"fold of {test_rows.size} held-out rows, {len(out)} ranks in "
        f"{time.perf_counter() - started:.3f}s"
    )
    return out


def cv_select_k(
    d: Dataset,
    S: int,
    p: int,
    k_grid: Sequence[int],
    scheme: Optional[CvScheme] = None,
    seed: int = 0,
    policy: RankPolicy = DEFAULT_POLICY,
    strategy: SliceStrategy = "equal_frequency",
    max_workers: int = 4,
    progress: bool = False,
    link: LinkKind = "nw",
) -> CvReport:
    """Pick the rank k minimizing CV(k) = sum of squared held-out errors.

    For every fold the model is refit on the held-in rows (covariance
    decomposition shared by all k), the link is estimated on the fitted
    indices and the held-out responses are predicted from their indices.
    Folds run on a thread pool; results are reduced in fold order. Ties go
    to the smaller k.

    Args:
        d: Data
        S: Number of slices
        p: Number of directions, fixed in advance
        k_grid: Candidate ranks; infeasible ones are skipped with a note
        scheme: Fold scheme, defaults to CvScheme.default_for(n)
        seed: Seed of the holdout partition
        policy: Rank policy of the fits
        strategy: Slicing strategy
        max_workers: Thread pool size
        progress: Show a progress bar
        link: "nw" for the kernel smoother, "spline" for a smoothing spline (p = 1 only)

    Returns:
        CvReport

    Raises:
        InputError: If no candidate is feasible, the training folds are too
            small for S slices, or every fold had an empty slice
    """
    if len(set(k_grid)) != len(k_grid) or not k_grid:
        raise InputError(f"k_grid must be non-empty without repeats, got {list(k_grid)}")
    if p < 1:
        raise InputError(f"p must be positive, got {p}")
    if link not in ("nw", "spline"):
        raise InputError(f"unknown link {link!r}; expected nw or spline")
    if link == "spline" and p != 1:
        raise InputError(f"the spline link takes a single index, got p={p}")
    scheme = scheme or CvScheme.default_for(d.n)
    folds = make_folds(d.n, scheme, seed)
    smallest = min(train.size for train, _ in folds)
    if smallest <= S:
        raise InputError(f"training folds of {smallest} rows cannot hold {S} slices")
    rank = retained_rank(sym_eigendecomp(sample_covariance(center(d)[0])), policy)
    ks, notes = _check_candidates(k_grid, d.J, S, p, rank)
    if not ks:
        raise InputError(f"no feasible rank in {list(k_grid)}: {notes}")

    results: Dict[int, Optional[Dict[int, NDArray[np.float64]]]] = {}
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        futures = {
            executor.submit(_run_fold, d, fold, S, p, ks, policy, strategy, link): idx
            for idx, fold in enumerate(folds)
        }
        with tqdm(total=len(folds), desc="Cross-validating", disable=not progress) as pbar:
            for future in as_completed(futures):
                results[futures[future]] = future.result()
                pbar.update(1)

    done = [results[i] for i in range(len(folds)) if results[i] is not None]
    skipped = len(folds) - len(done)
    if not done:
        raise InputError("every fold had an empty slice; nothing was cross-validated")
    for k in [k for k in ks if any(k not in r for r in done)]:
        ks.remove(k)
        notes[list(k_grid).index(k)] = f"infeasible: p={p} exceeds the numerical rank of a training fold"
    if not ks:
        raise InputError(f"no feasible rank in {list(k_grid)}: {notes}")
    errors = {k: np.concatenate([r[k] for r in done]) for k in ks}
    cv = {k: float(errors[k].sum()) for k in ks}
    best = min(cv.values())
    k_star = min(k for k in ks if cv[k] == best)

    n_units = errors[k_star].size
    se: Dict[int, float] = {}
    for k in ks:
        if k == k_star:
            se[k] = 0.0
        elif n_units < 2:
            se[k] = float("nan")
        else:
            diff = errors[k] - errors[k_star]
            se[k] = float(np.sqrt(n_units * diff.var(ddof=1)))
    significant = any(cv[k] - best > 2 * se[k] for k in ks if k != k_star and np.isfinite(se[k]))
    if skipped:
        logger.warning(f"{skipped} of {len(folds)} folds skipped for empty slices")
    logger.info(f"CV selected k={k_star} ({scheme}, seed {seed}, {link} link), significant={significant}")

    return CvReport(
        k_grid=list(k_grid),
        cv_values=[cv.get(k, float("nan")) for k in k_grid],
        cv_se=[se.get(k, float("nan")) for k in k_grid],
        k_star=k_star,
        scheme=scheme,
        seed=seed,
        notes=notes,
        n_folds=len(folds),
        folds_skipped=skipped,
        n_held_out=n_units,
        significant=significant,
        link=link,
    )
