"""Command-line front end.

Commands
--------
simulate       draw an autoregressive path to CSV
ct-table       accumulated-loss growth table over sample sizes (Monte Carlo)
horizon-table  multi-step RMSE ratio table across predictor variants (Monte Carlo)
rolling        expanding-origin multi-step evaluation of a CSV series
unit-root      normalized log-determinant unit-root check of a CSV series
pls            order selection by accumulated squared prediction error

Stochastic commands require an explicit --seed; identical flags and seed
reproduce identical output bytes regardless of --workers.  Exit codes:
0 success, 2 usage or validation error, 3 data error, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from typing import Sequence

import numpy as np

from .ar import ArCoefficients, ArProcess, NOISE_KINDS, RootFactorSpec, SeriesSample, simulate
from .diagnostics import pls_select, unit_root_stat
from .exceptions import (
    ArforecastError,
    EmptyHorizonError,
    ShortHistoryError,
    SingularMatrixError,
    TooShortError,
)
from .forecaster import METHODS, PredictorSpec
from .montecarlo import (
    DEFAULT_PREDICTORS,
    DEFAULT_T_GRID,
    HorizonTableConfig,
    LossTableConfig,
    rolling_table,
    run_horizon_table,
    run_loss_table,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


class UsageError(ValueError):
    """Bad command-line value (exit 2)."""


class DataFileError(ValueError):
    """Unreadable or malformed series file (exit 3)."""


def parse_factors(text: str) -> RootFactorSpec:
    """Parse "0.5^2,1.0" into ((0.5, 2), (1.0, 1))."""
    factors = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            raise UsageError(f"empty factor in {text!r}")
        root_s, sep, mult_s = token.partition("^")
        try:
            root = float(root_s)
            mult = int(mult_s) if sep else 1
        except ValueError as exc:
            raise UsageError(f"bad factor {token!r}: {exc}") from exc
        if not math.isfinite(root):
            raise UsageError(f"bad factor {token!r}: root must be finite")
        if mult < 1:
            raise UsageError(f"bad factor {token!r}: multiplicity must be >= 1")
        factors.append((root, mult))
    if not factors:
        raise UsageError("at least one factor is required")
    return RootFactorSpec(tuple(factors))


def parse_beta(text: str) -> ArCoefficients:
    """Parse "2,-1.25,0.25" into a coefficient vector."""
    try:
        beta = tuple(float(tok) for tok in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad coefficient list {text!r}: {exc}") from exc
    try:
        return ArCoefficients(beta)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def parse_grid(text: str) -> tuple[int, ...]:
    try:
        grid = tuple(int(tok) for tok in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad size grid {text!r}: {exc}") from exc
    return grid


def parse_predictor(text: str) -> PredictorSpec:
    """Parse "3:1" or "2:0:direct" into a PredictorSpec."""
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise UsageError(f"bad predictor {text!r}: expected order:diff[:method]")
    try:
        order, diff = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise UsageError(f"bad predictor {text!r}: {exc}") from exc
    method = parts[2] if len(parts) == 3 else "plugin"
    try:
        return PredictorSpec(order, diff, method)
    except ValueError as exc:
        raise UsageError(f"bad predictor {text!r}: {exc}") from exc


def parse_predictor_list(text: str) -> tuple[PredictorSpec, ...]:
    return tuple(parse_predictor(tok.strip()) for tok in text.split(","))


def read_series_csv(path: str) -> np.ndarray:
    """Read the first column of a CSV series file.

    The header row is optional and auto-detected (first row not parseable
    as a number).  At least 2 finite data rows are required.
    """
    try:
        with open(path, newline="") as fh:
            rows = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    except OSError as exc:
        raise DataFileError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise DataFileError(f"{path}: empty file")
    start = 0
    try:
        float(rows[0][0])
    except ValueError:
        start = 1
    values = []
    for i, row in enumerate(rows[start:], start=start + 1):
        try:
            v = float(row[0])
        except ValueError as exc:
            raise DataFileError(f"{path}: bad value on row {i}: {row[0]!r}") from exc
        if not math.isfinite(v):
            raise DataFileError(f"{path}: non-finite value on row {i}")
        values.append(v)
    if len(values) < 2:
        raise DataFileError(f"{path}: need at least 2 data rows, got {len(values)}")
    return np.asarray(values)


def write_series_csv(path: str, sample: SeriesSample, with_innovations: bool) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if with_innovations:
            writer.writerow(["value", "innovation"])
            for v, e in zip(sample.values, sample.innovations):
                writer.writerow([f"{v:.17g}", f"{e:.17g}"])
        else:
            writer.writerow(["value"])
            for v in sample.values:
                writer.writerow([f"{v:.17g}"])


def _model_process(args: argparse.Namespace) -> ArProcess:
    if getattr(args, "factors", None) and getattr(args, "beta", None):
        raise UsageError("give either --factors or --beta, not both")
    if getattr(args, "factors", None):
        from .ar import coefficients_from_factors

        coeffs = coefficients_from_factors(parse_factors(args.factors))
    elif getattr(args, "beta", None):
        coeffs = parse_beta(args.beta)
    else:
        raise UsageError("a model is required: --factors or --beta")
    return ArProcess(coeffs, sigma=args.sigma, noise=args.noise)


def _require_factors(args: argparse.Namespace) -> RootFactorSpec:
    if not getattr(args, "factors", None):
        raise UsageError("--factors is required for this command")
    return parse_factors(args.factors)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_simulate(args: argparse.Namespace) -> int:
    process = _model_process(args)
    sample = simulate(process, args.T, args.seed, burn_in=args.burn_in)
    if args.out:
        write_series_csv(args.out, sample, args.with_innovations)
    else:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        if args.with_innovations:
            writer.writerow(["value", "innovation"])
            for v, e in zip(sample.values, sample.innovations):
                writer.writerow([f"{v:.17g}", f"{e:.17g}"])
        else:
            writer.writerow(["value"])
            for v in sample.values:
                writer.writerow([f"{v:.17g}"])
    return EXIT_OK


def cmd_ct_table(args: argparse.Namespace) -> int:
    cfg = LossTableConfig(
        factors=_require_factors(args),
        master_seed=args.seed,
        t_grid=parse_grid(args.t_grid) if args.t_grid else DEFAULT_T_GRID,
        replications=args.R,
        t0=args.t0,
        d_variants=tuple(int(d) for d in args.d.split(",")) if args.d else (0, 1),
        fit_order=args.fit_order,
        fit_intercept=not args.no_intercept,
        sigma=args.sigma,
        noise=args.noise,
        shared_path=not args.independent_draws,
        per_step_normalization=args.per_step,
        workers=args.workers,
    )
    run = run_loss_table(cfg)
    sys.stdout.write("accumulated excess loss (mean over replications)\n")
    sys.stdout.write(run.excess.to_text())
    sys.stdout.write("\naccumulated squared prediction error (mean over replications)\n")
    sys.stdout.write(run.mse.to_text())
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(run.excess.to_csv())
    if args.mse_out:
        with open(args.mse_out, "w") as fh:
            fh.write(run.mse.to_csv())
    return EXIT_OK


def cmd_horizon_table(args: argparse.Namespace) -> int:
    predictors = (
        parse_predictor_list(args.predictors) if args.predictors else DEFAULT_PREDICTORS
    )
    if args.method == "direct":
        predictors = tuple(
            PredictorSpec(s.order, s.diff, "direct") for s in predictors
        )
    cfg = HorizonTableConfig(
        factors=_require_factors(args),
        master_seed=args.seed,
        length=args.length,
        estimation_start=args.start,
        max_horizon=args.h_max,
        replications=args.R,
        predictors=predictors,
        fit_intercept=not args.no_intercept,
        sigma=args.sigma,
        noise=args.noise,
        workers=args.workers,
    )
    table = run_horizon_table(cfg)
    sys.stdout.write(table.to_text())
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(table.to_csv())
    return EXIT_OK


def cmd_rolling(args: argparse.Namespace) -> int:
    values = read_series_csv(args.series)
    predictors = tuple(parse_predictor(s) for s in args.spec)
    table = rolling_table(
        values, predictors, args.start, args.h_max, fit_intercept=args.intercept
    )
    sys.stdout.write(table.to_text())
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(table.to_csv())
    return EXIT_OK


def cmd_unit_root(args: argparse.Namespace) -> int:
    values = read_series_csv(args.series)
    report = unit_root_stat(values, args.order, threshold=args.threshold)
    sys.stdout.write(report.summary() + "\n")
    return EXIT_OK


def cmd_pls(args: argparse.Namespace) -> int:
    values = read_series_csv(args.series)
    report = pls_select(values, args.max_order, t0=args.t0)
    sys.stdout.write(report.summary() + "\n")
    if args.out:
        lines = ["order,criterion"] + [
            f"{j},{report.criterion[j]:.17g}" for j in sorted(report.criterion)
        ]
        with open(args.out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    return EXIT_OK


def _add_model_args(p: argparse.ArgumentParser, beta_allowed: bool = True) -> None:
    p.add_argument(
        "--factors",
        help='characteristic factors, e.g. "0.5^2,1.0" for (1-0.5B)^2 (1-B)',
    )
    if beta_allowed:
        p.add_argument("--beta", help='lag coefficients, e.g. "2,-1.25,0.25"')
    p.add_argument("--sigma", type=float, default=1.0, help="innovation scale (default 1)")
    p.add_argument(
        "--noise",
        choices=NOISE_KINDS,
        default="gaussian",
        help="innovation distribution (default gaussian)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arforecast",
        description="Least-squares forecasting and accumulated-loss diagnostics "
        "for stable and unit-root autoregressions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate an autoregressive path to CSV")
    _add_model_args(p)
    p.add_argument("--T", type=int, required=True, help="series length")
    p.add_argument("--seed", type=int, required=True, help="generator seed")
    p.add_argument("--burn-in", type=int, default=0, help="discarded warm-up steps")
    p.add_argument("--with-innovations", action="store_true", help="add an innovation column")
    p.add_argument("--out", help="output CSV path (default: stdout)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("ct-table", help="accumulated-loss growth table over sample sizes")
    _add_model_args(p, beta_allowed=False)
    p.add_argument("--R", type=int, default=1000, help="replications (default 1000)")
    p.add_argument("--seed", type=int, required=True, help="master seed")
    p.add_argument("--t-grid", help='sample sizes, e.g. "100,200,300" (default 100..1000)')
    p.add_argument("--t0", type=int, default=10, help="first scored step is t0+1 (default 10)")
    p.add_argument("--d", help='unit roots imposed, e.g. "0,1" (default both)')
    p.add_argument("--fit-order", type=int, help="override the fitted level order")
    p.add_argument(
        "--no-intercept",
        action="store_true",
        help="drop the constant column from the recursive fit",
    )
    p.add_argument("--per-step", action="store_true", help="divide cells by T - t0")
    p.add_argument(
        "--independent-draws",
        action="store_true",
        help="independent simulation per grid size instead of shared prefixes",
    )
    p.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
    p.add_argument("--out", help="CSV path for the excess-loss table")
    p.add_argument("--mse-out", help="CSV path for the squared-error table")
    p.set_defaults(func=cmd_ct_table)

    p = sub.add_parser("horizon-table", help="multi-step RMSE ratio table (Monte Carlo)")
    _add_model_args(p, beta_allowed=False)
    p.add_argument("--R", type=int, default=1000, help="replications (default 1000)")
    p.add_argument("--seed", type=int, required=True, help="master seed")
    p.add_argument("--length", type=int, default=400, help="series length (default 400)")
    p.add_argument(
        "--start", type=int, default=300, help="first estimation size / origin (default 300)"
    )
    p.add_argument("--h-max", type=int, default=60, help="largest horizon (default 60)")
    p.add_argument(
        "--predictors",
        help='order:diff list, e.g. "3:0,3:1,2:0" (default "3:0,3:1,2:0,2:1,4:0,4:1"); '
        "first entry is the ratio benchmark",
    )
    p.add_argument(
        "--method",
        choices=METHODS,
        default="plugin",
        help="forecast construction for all predictors (default plugin)",
    )
    p.add_argument(
        "--no-intercept",
        action="store_true",
        help="drop the constant column from estimation",
    )
    p.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
    p.add_argument("--out", help="output CSV path")
    p.set_defaults(func=cmd_horizon_table)

    p = sub.add_parser("rolling", help="expanding-origin evaluation of a CSV series")
    p.add_argument("series", help="CSV file with one series")
    p.add_argument(
        "--spec",
        action="append",
        required=True,
        help='predictor "order:diff[:method]"; repeat for ratio columns '
        "(first is the benchmark)",
    )
    p.add_argument("--h-max", type=int, default=20, help="largest horizon (default 20)")
    p.add_argument(
        "--start", type=int, default=100, help="first estimation size / origin (default 100)"
    )
    p.add_argument(
        "--intercept",
        action="store_true",
        help="include a constant column in estimation (observed series often "
        "have a nonzero level)",
    )
    p.add_argument("--out", help="output CSV path")
    p.set_defaults(func=cmd_rolling)

    p = sub.add_parser("unit-root", help="normalized log-determinant unit-root check")
    p.add_argument("series", help="CSV file with one series")
    p.add_argument("--order", type=int, required=True, help="lag order (or an upper bound)")
    p.add_argument("--threshold", type=float, default=0.5, help="decision threshold (default 0.5)")
    p.set_defaults(func=cmd_unit_root)

    p = sub.add_parser("pls", help="order selection by accumulated prediction error")
    p.add_argument("series", help="CSV file with one series")
    p.add_argument("--max-order", type=int, required=True, help="largest candidate order")
    p.add_argument("--t0", type=int, default=10, help="first scored step is t0+1 (default 10)")
    p.add_argument("--out", help="CSV path for the per-order criterion")
    p.set_defaults(func=cmd_pls)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataFileError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (TooShortError, ShortHistoryError, EmptyHorizonError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except SingularMatrixError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, ArforecastError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
