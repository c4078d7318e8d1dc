"""
Held-out prediction error on the Tecator meat spectra.

The data are not bundled. Prepare a dataset CSV with the 100 absorbance
channels as curve columns (header = channel wavelengths, increasing) and the
fat content as a proportion in (0, 1) in a final "y" column, rows in the
original order. The response is modelled on the log10-odds scale.

The first --train-rows rows (default 125) fit the model and the link; the
remaining rows (115 in the usual split) are predicted. One RMSE is reported per
rank in --ranks.

Example
-------
  python scripts/tecator_holdout.py --data tecator.csv --out tecator_rmse.csv
"""

import argparse
import logging
import sys

import numpy as np
import pandas as pd

from funcsir import (
    DataError,
    FuncSirError,
    atomic_write,
    fit,
    fit_smoother,
    predict_indices,
    predict_smoother,
    prediction_error,
    read_dataset,
    to_csv_text,
)
from funcsir.cli import parse_rank_grid

logger = logging.getLogger("tecator")


def main() -> int:
    p = argparse.ArgumentParser(description="Tecator 125/115 holdout prediction error")
    p.add_argument("--data", type=str, required=True)
    p.add_argument("--train-rows", type=int, default=125)
    p.add_argument("--ranks", type=str, default="5,21,25", help="Ranks a..b or a,b,c")
    p.add_argument("--dirs", type=int, default=4)
    p.add_argument("--slices", type=int, default=10)
    p.add_argument("--transform", choices=["none", "logit10"], default="logit10")
    p.add_argument("--out", type=str, default=None)
    args = p.parse_args()

    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    logging.captureWarnings(True)

    try:
        d = read_dataset(args.data, args.transform)
        if not (args.slices < args.train_rows <= d.n - 2):
            raise DataError(
                f"--train-rows {args.train_rows} must exceed --slices {args.slices} "
                f"and leave at least 2 of the n={d.n} rows for testing"
            )
        train = d.take(np.arange(args.train_rows))
        test = d.take(np.arange(args.train_rows, d.n))
        rows = []
        for k in parse_rank_grid(args.ranks):
            fitted = fit(train, k, S=args.slices, p=args.dirs)
            smoother = fit_smoother(fitted.xi_hat, train.y)
            y_hat = predict_smoother(smoother, predict_indices(fitted, test.x))
            rows.append({"k": k, "p": args.dirs, "rmse": prediction_error(y_hat, test.y)})
            logger.info(f"k={k}: RMSE {rows[-1]['rmse']:.8g} on {test.n} held-out rows")
    except FuncSirError as e:
        logger.error(f"{e}")
        return 3

    table = pd.DataFrame(rows)
    print(table.to_string(index=False))
    if args.out:
        atomic_write(args.out, to_csv_text(table))
    return 0


if __name__ == "__main__":
    sys.exit(main())
