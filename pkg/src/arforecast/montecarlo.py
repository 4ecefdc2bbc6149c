"""Monte Carlo drivers: accumulated-loss growth tables and horizon tables.

Both experiments are deterministic functions of their configuration: every
replication draws from a counter-based generator keyed by (master_seed,
replication, stream), per-replication results are reduced in replication
order, and table cells are plain means, so reruns are byte-identical
regardless of worker count.

The loss-growth experiment simulates each replication once at the largest
grid size and reads the smaller sizes off ledger snapshots of the same
expanding pass (an expanding estimate at time t only sees data up to t, so
this equals running each prefix separately); set ``shared_path=False`` for
independent draws per grid size.  The horizon experiment reserves the
first part of each path for estimation, then re-estimates at every origin
and forecasts up to the horizon cap, accumulating squared errors per
predictor variant and horizon; all variants see the same paths, so the
reported ratio columns are matched-pairs comparisons.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Iterable

import numpy as np
from numpy.typing import NDArray

from .ar import ArProcess, RootFactorSpec, coefficients_from_factors, derive_seed, simulate
from .diagnostics import fit_log_slope
from .estimator import RlsState, run_expanding_forecast
from .exceptions import TooShortError
from .forecaster import (
    PredictorSpec,
    direct_forecast_path,
    integrated_plugin_forecast,
    plugin_forecast,
)

__all__ = [
    "TableResult",
    "LossTableConfig",
    "LossTableRun",
    "HorizonTableConfig",
    "run_loss_table",
    "run_horizon_table",
    "DEFAULT_T_GRID",
    "DEFAULT_PREDICTORS",
]

DEFAULT_T_GRID = tuple(range(100, 1001, 100))

DEFAULT_PREDICTORS = (
    PredictorSpec(3, 0),
    PredictorSpec(3, 1),
    PredictorSpec(2, 0),
    PredictorSpec(2, 1),
    PredictorSpec(4, 0),
    PredictorSpec(4, 1),
)


@dataclass
class TableResult:
    """A labeled numeric table with optional trailing summary rows.

    ``to_csv`` emits full-precision (17 significant digit) cells and no
    volatile metadata, so identical experiments produce identical bytes.
    ``to_text`` renders the fixed-width 2-decimal view.
    """

    row_name: str
    row_labels: list
    columns: list[str]
    values: NDArray[np.float64]
    extra_rows: list[tuple[str, tuple[float, ...]]] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        lines = [",".join([self.row_name] + list(self.columns))]
        for label, row in zip(self.row_labels, self.values):
            lines.append(",".join([str(label)] + [f"{v:.17g}" for v in row]))
        for label, row in self.extra_rows:
            lines.append(",".join([str(label)] + [f"{v:.17g}" for v in row]))
        return "\n".join(lines) + "\n"

    def to_text(self, decimals: int = 2, extra_decimals: int = 4) -> str:
        head = [self.row_name] + list(self.columns)
        body = [
            [str(label)] + [f"{v:.{decimals}f}" for v in row]
            for label, row in zip(self.row_labels, self.values)
        ]
        tail = [
            [str(label)] + [f"{v:.{extra_decimals}f}" for v in row]
            for label, row in self.extra_rows
        ]
        widths = [
            max(len(r[i]) for r in [head] + body + tail) for i in range(len(head))
        ]
        def fmt(cells: list[str]) -> str:
            return "  ".join(c.rjust(w) for c, w in zip(cells, widths))
        return "\n".join([fmt(head)] + [fmt(r) for r in body + tail]) + "\n"


def _positive_int(name: str, value) -> int:
    if not isinstance(value, int) or value < 1:
        raise ValueError(f"{name} must be an integer >= 1, got {value!r}")
    return value


@dataclass(frozen=True)
class LossTableConfig:
    """Configuration of the accumulated-loss growth experiment.

    ``factors`` defines the data-generating process; the fitted level order
    defaults to its total order.  ``d_variants`` lists how many unit roots
    to impose on the estimator (0 = unconstrained, 1 = first differences).
    The recursive fit includes an intercept by default, matching the usual
    reporting convention for this table; set ``fit_intercept=False`` for
    the pure lag regression.  With ``per_step_normalization`` the table
    cells are divided by T - t0 on top of the replication average.
    """

    factors: RootFactorSpec
    master_seed: int
    t_grid: tuple[int, ...] = DEFAULT_T_GRID
    replications: int = 1000
    t0: int = 10
    d_variants: tuple[int, ...] = (0, 1)
    fit_order: int | None = None
    fit_intercept: bool = True
    sigma: float = 1.0
    noise: str = "gaussian"
    shared_path: bool = True
    per_step_normalization: bool = False
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "t_grid", tuple(int(T) for T in self.t_grid))
        object.__setattr__(self, "d_variants", tuple(int(d) for d in self.d_variants))
        _positive_int("replications", self.replications)
        _positive_int("workers", self.workers)
        if not self.t_grid:
            raise ValueError("t_grid must not be empty")
        if list(self.t_grid) != sorted(set(self.t_grid)):
            raise ValueError("t_grid must be strictly increasing")
        if not self.d_variants or any(d not in (0, 1) for d in self.d_variants):
            raise ValueError(f"d_variants must be a non-empty subset of (0, 1), got {self.d_variants}")
        if len(set(self.d_variants)) != len(self.d_variants):
            raise ValueError("d_variants must not repeat")
        p = self.order
        if not self.t0 > p:
            raise ValueError(f"t0 must exceed the fitted order, got t0={self.t0}, order={p}")
        if self.t_grid[0] <= self.t0:
            raise ValueError(f"every grid size must exceed t0={self.t0}")

    @property
    def order(self) -> int:
        return self.fit_order if self.fit_order is not None else self.factors.order

    def process(self) -> ArProcess:
        return ArProcess(
            coefficients_from_factors(self.factors), sigma=self.sigma, noise=self.noise
        )


@dataclass
class LossTableRun:
    """Result bundle of the loss-growth experiment."""

    excess: TableResult
    mse: TableResult
    slope: dict[str, float]
    r_squared: dict[str, float]


def _loss_table_rep(cfg: LossTableConfig, rep: int) -> NDArray[np.float64]:
    """One replication: accumulated (excess, squared-error) per (T, d)."""
    process = cfg.process()
    p = cfg.order
    out = np.empty((len(cfg.t_grid), len(cfg.d_variants), 2))
    if cfg.shared_path:
        sample = simulate(process, cfg.t_grid[-1], derive_seed(cfg.master_seed, rep, 0))
        for di, d in enumerate(cfg.d_variants):
            ledger = run_expanding_forecast(
                sample,
                p,
                d,
                cfg.t0,
                keep_records=False,
                checkpoints=cfg.t_grid,
                fit_intercept=cfg.fit_intercept,
            )
            for ti, T in enumerate(cfg.t_grid):
                snap = ledger.snapshots[T]
                out[ti, di] = (snap.excess_loss, snap.sum_sq_err)
    else:
        for ti, T in enumerate(cfg.t_grid):
            sample = simulate(process, T, derive_seed(cfg.master_seed, rep, ti + 1))
            for di, d in enumerate(cfg.d_variants):
                ledger = run_expanding_forecast(
                    sample, p, d, cfg.t0, keep_records=False, fit_intercept=cfg.fit_intercept
                )
                out[ti, di] = (ledger.excess_loss, ledger.sum_sq_err)
    return out


def _map_replications(
    worker: Callable[[int], NDArray[np.float64]], replications: int, workers: int
) -> Iterable[NDArray[np.float64]]:
    if workers == 1:
        return map(worker, range(replications))
    chunk = max(1, math.ceil(replications / (workers * 4)))
    pool = ProcessPoolExecutor(max_workers=workers)
    try:
        return list(pool.map(worker, range(replications), chunksize=chunk))
    finally:
        pool.shutdown()


def run_loss_table(cfg: LossTableConfig) -> LossTableRun:
    """Average accumulated excess loss and squared error over replications,
    with a no-intercept log-growth slope fitted to each excess column."""
    total = np.zeros((len(cfg.t_grid), len(cfg.d_variants), 2))
    for arr in _map_replications(partial(_loss_table_rep, cfg), cfg.replications, cfg.workers):
        total += arr
    mean = total / cfg.replications
    columns = [f"d={d}" for d in cfg.d_variants]
    # The slope always fits the accumulated averages: that is the quantity
    # whose growth is log-linear, whatever normalization the table shows.
    slope: dict[str, float] = {}
    r_squared: dict[str, float] = {}
    slope_row, r2_row = [], []
    if len(cfg.t_grid) >= 2:
        for di, col in enumerate(columns):
            fit = fit_log_slope(cfg.t_grid, mean[:, di, 0], cfg.t0)
            slope[col] = fit.slope
            r_squared[col] = fit.r_squared
            slope_row.append(fit.slope)
            r2_row.append(fit.r_squared)
    excess_values = mean[:, :, 0]
    mse_values = mean[:, :, 1]
    if cfg.per_step_normalization:
        steps = np.asarray(cfg.t_grid, dtype=float)[:, None] - cfg.t0
        excess_values = excess_values / steps
        mse_values = mse_values / steps
    meta = {
        "replications": cfg.replications,
        "master_seed": cfg.master_seed,
        "t0": cfg.t0,
        "shared_path": cfg.shared_path,
        "fit_intercept": cfg.fit_intercept,
        "per_step_normalization": cfg.per_step_normalization,
    }
    extra = (
        [("slope", tuple(slope_row)), ("r_squared", tuple(r2_row))] if slope_row else []
    )
    excess = TableResult(
        row_name="T",
        row_labels=list(cfg.t_grid),
        columns=columns,
        values=excess_values,
        extra_rows=extra,
        meta=dict(meta),
    )
    mse = TableResult(
        row_name="T",
        row_labels=list(cfg.t_grid),
        columns=columns,
        values=mse_values,
        meta=dict(meta),
    )
    return LossTableRun(excess=excess, mse=mse, slope=slope, r_squared=r_squared)


@dataclass(frozen=True)
class HorizonTableConfig:
    """Configuration of the multi-step comparison experiment.

    Each replication simulates ``length`` observations; every origin
    t = estimation_start..length-1 re-estimates each predictor on data up
    to t and forecasts min(max_horizon, length - t) steps ahead.  Squared
    errors pool over replications and origins, and every predictor is
    reported as a percentage ratio to the first one.  Estimation includes
    an intercept by default (``fit_intercept=False`` for pure lag fits).
    """

    factors: RootFactorSpec
    master_seed: int
    length: int = 400
    estimation_start: int = 300
    max_horizon: int = 60
    replications: int = 1000
    predictors: tuple[PredictorSpec, ...] = DEFAULT_PREDICTORS
    fit_intercept: bool = True
    sigma: float = 1.0
    noise: str = "gaussian"
    workers: int = 1

    def __post_init__(self):
        preds = tuple(self.predictors)
        object.__setattr__(self, "predictors", preds)
        _positive_int("replications", self.replications)
        _positive_int("max_horizon", self.max_horizon)
        _positive_int("workers", self.workers)
        if not preds:
            raise ValueError("predictors must not be empty")
        if not 0 < self.estimation_start < self.length:
            raise ValueError(
                f"need 0 < estimation_start < length, got {self.estimation_start}, {self.length}"
            )
        max_order = max(s.order for s in preds)
        if self.estimation_start <= max_order + 1:
            raise ValueError(
                f"estimation_start {self.estimation_start} too small for order {max_order}"
            )

    def process(self) -> ArProcess:
        return ArProcess(
            coefficients_from_factors(self.factors), sigma=self.sigma, noise=self.noise
        )


def accumulate_horizon_sq_errors(
    values: NDArray[np.float64],
    spec: PredictorSpec,
    start: int,
    max_horizon: int,
    sums: NDArray[np.float64],
    counts: NDArray[np.float64] | None = None,
    fit_intercept: bool = False,
) -> None:
    """Add squared forecast errors of ``spec`` into ``sums`` (length
    max_horizon), one expanding origin at a time: origins t = start..T-1,
    horizons 1..min(max_horizon, T - t).

    Plug-in predictors stream one recursive fit across origins; the direct
    method re-fits per origin and horizon.  ``counts`` (same length)
    receives the number of records per horizon when given.
    """
    n = len(values)
    if spec.method == "plugin":
        state = RlsState(spec.order, spec.diff, fit_intercept=fit_intercept)
        for i in range(n):
            state.step(float(values[i]))
            t = i + 1
            if t < start or t >= n:
                continue
            h_eff = min(max_horizon, n - t)
            history = values[:t]
            beta = state.beta_hat
            c, lags = (beta[0], beta[1:]) if fit_intercept else (0.0, beta)
            if spec.diff == 0:
                fc = plugin_forecast(lags, history[-spec.order :], h_eff, c)
            else:
                fc = integrated_plugin_forecast(lags, history[-spec.order - 1 :], h_eff, c)
            err = values[t : t + h_eff] - fc.values
            sums[:h_eff] += err * err
            if counts is not None:
                counts[:h_eff] += 1.0
    else:
        for t in range(start, n):
            h_eff = min(max_horizon, n - t)
            path = direct_forecast_path(
                values[:t], spec.order, h_eff, spec.diff, fit_intercept
            )
            err = values[t : t + h_eff] - path
            sums[:h_eff] += err * err
            if counts is not None:
                counts[:h_eff] += 1.0


def _horizon_rep(cfg: HorizonTableConfig, rep: int) -> NDArray[np.float64]:
    """One replication: squared-error sums per (predictor, horizon) plus a
    trailing row of record counts per horizon."""
    sample = simulate(cfg.process(), cfg.length, derive_seed(cfg.master_seed, rep, 0))
    out = np.zeros((len(cfg.predictors) + 1, cfg.max_horizon))
    for si, spec in enumerate(cfg.predictors):
        accumulate_horizon_sq_errors(
            sample.values,
            spec,
            cfg.estimation_start,
            cfg.max_horizon,
            out[si],
            counts=out[-1] if si == 0 else None,
            fit_intercept=cfg.fit_intercept,
        )
    return out


def _ratio_table(
    predictors: tuple[PredictorSpec, ...], total: NDArray[np.float64], meta: dict
) -> TableResult:
    # total rows: per-predictor squared-error sums, then a row of counts.
    counts = total[-1]
    reachable = counts > 0
    horizons = [h for h in range(1, total.shape[1] + 1) if reachable[h - 1]]
    rmse = np.sqrt(total[:-1, reachable] / counts[reachable])
    benchmark = rmse[0]
    columns = [f"rmse {predictors[0].label()}"] + [f"ratio {s.label()}" for s in predictors]
    with np.errstate(invalid="ignore", divide="ignore"):
        ratios = [100.0 * (rmse[si] / benchmark) for si in range(len(predictors))]
    values = np.column_stack([benchmark] + ratios)
    return TableResult(
        row_name="step", row_labels=horizons, columns=columns, values=values, meta=meta
    )


def run_horizon_table(cfg: HorizonTableConfig) -> TableResult:
    """Pooled RMSE per horizon for the first predictor plus percentage
    ratio columns for every predictor (the first is 100 by construction)."""
    total = np.zeros((len(cfg.predictors) + 1, cfg.max_horizon))
    for arr in _map_replications(partial(_horizon_rep, cfg), cfg.replications, cfg.workers):
        total += arr
    meta = {
        "replications": cfg.replications,
        "master_seed": cfg.master_seed,
        "length": cfg.length,
        "estimation_start": cfg.estimation_start,
        "fit_intercept": cfg.fit_intercept,
    }
    return _ratio_table(cfg.predictors, total, meta)


def rolling_table(
    values: NDArray[np.float64],
    predictors: tuple[PredictorSpec, ...],
    start: int,
    max_horizon: int,
    fit_intercept: bool = False,
) -> TableResult:
    """Expanding-origin evaluation of predictor variants on one observed
    series: origins t = start..T-1, horizons 1..min(max_horizon, T - t),
    RMSE pooled over origins, ratio columns against the first predictor."""
    values = np.asarray(values, dtype=float)
    if not predictors:
        raise ValueError("predictors must not be empty")
    _positive_int("max_horizon", max_horizon)
    max_order = max(s.order for s in predictors)
    if start <= max_order + 1:
        raise ValueError(f"start {start} too small for predictor order {max_order}")
    if len(values) <= start:
        raise TooShortError(
            f"series length {len(values)} leaves no forecast origin at start {start}"
        )
    total = np.zeros((len(predictors) + 1, max_horizon))
    for si, spec in enumerate(predictors):
        accumulate_horizon_sq_errors(
            values,
            spec,
            start,
            max_horizon,
            total[si],
            counts=total[-1] if si == 0 else None,
            fit_intercept=fit_intercept,
        )
    return _ratio_table(predictors, total, {"start": start, "length": len(values)})
