import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from ..base.errors import DataError, EmptySliceError, FuncSirError, InputError, NumericalError
from ..link.cv import CvScheme
from .commands import COMMANDS, cmd_cv, cmd_diagnose, cmd_fit, cmd_predict, cmd_simulate
from .config import MODEL_ALIASES, RunConfig, parse_rank_grid
from .templates import render

__all__ = [
    "main",
    "build_parser",
    "config_from_args",
    "RunConfig",
    "parse_rank_grid",
    "cmd_simulate",
    "cmd_fit",
    "cmd_cv",
    "cmd_predict",
    "cmd_diagnose",
    "render",
    "EXIT_OK",
    "EXIT_USAGE",
    "EXIT_DATA",
    "EXIT_NUMERICAL",
]

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4

_MODELS = ["example1", "example2", *MODEL_ALIASES, "finite_dim", "null_model"]


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=str, default=None, help="Replay a configuration printed by --echo-config")
    p.add_argument("--echo-config", action="store_true", help="Print the validated configuration as JSON")
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("-v", "--verbose", action="store_true")


def _data_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", type=str, default=None, help="Dataset CSV with header t_1,...,t_J,y")
    p.add_argument("--transform", choices=["none", "logit10"], default=None)
    p.add_argument("--slices", type=int, default=None, help="Number of slices S (default 10)")
    p.add_argument("--rel-tol", type=float, default=None, help="Relative eigenvalue cutoff (default 1e-10)")
    p.add_argument("--abs-floor", type=float, default=None)
    p.add_argument("--train-rows", type=int, default=None, help="Use only the first m rows for fitting")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="funcsir", description="Functional sliced inverse regression")
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("simulate", help="Write a simulated dataset and its true indices")
    _common(ps)
    ps.add_argument("--model", choices=_MODELS, default=None)
    ps.add_argument("--n", type=int, default=None)
    ps.add_argument("--grid-size", type=int, default=None)
    ps.add_argument("--noise-sd", type=float, default=None)
    ps.add_argument("--hurst", type=float, default=None)

    pf = sub.add_parser("fit", help="Fit at a fixed rank and write a fit file")
    _common(pf)
    _data_flags(pf)
    pf.add_argument("--rank", type=int, default=None)
    pf.add_argument("--dirs", type=int, default=None)

    pc = sub.add_parser("cv", help="Choose the rank by cross-validation")
    _common(pc)
    _data_flags(pc)
    pc.add_argument("--rank-grid", type=str, default=None, help="Candidate ranks a..b or a,b,c")
    pc.add_argument("--dirs", type=int, default=None)
    pc.add_argument("--scheme", type=str, default=None, help="loo | holdout:<frac> | split:<m>")
    pc.add_argument("--workers", type=int, default=None)
    pc.add_argument("--link", choices=["nw", "spline"], default=None, help="Link regressor (spline needs --dirs 1)")

    pp = sub.add_parser("predict", help="Predict responses of new curves")
    _common(pp)
    pp.add_argument("--fit", type=str, default=None, help="Fit file written by the fit command")
    pp.add_argument("--data", type=str, default=None)
    pp.add_argument("--transform", choices=["none", "logit10"], default=None)
    pp.add_argument("--train-rows", type=int, default=None, help="Predict only the rows after the first m")
    pp.add_argument("--link", choices=["nw", "spline"], default=None, help="Link regressor (spline needs a one-direction fit)")

    pd_ = sub.add_parser("diagnose", help="Technical-condition diagnostics")
    _common(pd_)
    _data_flags(pd_)
    pd_.add_argument("--k-max", type=int, default=None)
    pd_.add_argument("--brownian", action="store_true", default=None, help="Compare eigenvalues with Brownian motion")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Merge a replayed configuration with the flags given on the command line.

    Raises:
        InputError: On malformed flag values
        pydantic.ValidationError: If the merged configuration is invalid
    """
    fields: Dict[str, Any] = {}
    if args.config:
        try:
            replay = RunConfig.model_validate_json(Path(args.config).read_text(encoding="utf-8"))
        except OSError as e:
            raise InputError(f"cannot read configuration {args.config}: {e}") from e
        if replay.command != args.command:
            raise InputError(f"{args.config} configures {replay.command}, not {args.command}")
        fields.update(replay.model_dump(exclude_unset=True))
    for name, value in vars(args).items():
        if name in ("config", "echo_config", "verbose") or value is None:
            continue
        if name == "rank_grid":
            value = parse_rank_grid(value)
        elif name == "scheme":
            value = CvScheme.parse(value)
        fields[name] = value
    return RunConfig(**fields)


def main(argv: Optional[List[str]] = None) -> int:
    """Command-line entry point; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    logging.captureWarnings(True)

    try:
        config = config_from_args(args)
    except (InputError, ValidationError) as e:
        print(f"funcsir {args.command}: {e}", file=sys.stderr)
        return EXIT_USAGE
    if args.echo_config:
        print(config.model_dump_json())

    try:
        print(COMMANDS[config.command](config), end="")
    except NumericalError as e:
        logger.error(f"numerical failure: {e}")
        return EXIT_NUMERICAL
    except (DataError, EmptySliceError) as e:
        logger.error(f"data error: {e}")
        return EXIT_DATA
    except InputError as e:
        # argument values the data cannot support, such as --rank above J
        print(f"funcsir {config.command}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except FuncSirError as e:
        logger.error(f"{e}")
        return EXIT_DATA
    return EXIT_OK
