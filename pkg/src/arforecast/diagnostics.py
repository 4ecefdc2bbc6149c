"""Growth-rate diagnostics built on the expanding-window ledger.

The log-determinant of the lag-vector Gram matrix, normalized by log T,
converges to the regression order plus a contribution for every root on
the unit circle (1 for a single unit root, 4 for a double one, and so on
per squared multiplicity; complex pairs count twice).  That makes the
normalized log-determinant a unit-root detector needing no tabulated
critical values, and it also gives the theoretical growth coefficient of
the accumulated excess loss.  Order selection by accumulated squared
prediction error (predictive least squares) lives here too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, NamedTuple, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from numpy.typing import NDArray

from . import linalg
from .estimator import DEFAULT_T0, run_expanding_forecast
from .exceptions import (
    BadMultiplicityError,
    BadOrderError,
    DegenerateFitError,
    EmptyHorizonError,
    SingularGramError,
    SingularMatrixError,
    TooShortError,
)

__all__ = [
    "UnitRootReport",
    "PlsReport",
    "LogSlopeFit",
    "excess_loss_coefficient",
    "logdet_ratio",
    "unit_root_stat",
    "pls_select",
    "rmse_by_horizon",
    "fit_log_slope",
]

UNIT_ROOT_THRESHOLD = 0.5


@dataclass(frozen=True)
class UnitRootReport:
    """Outcome of the normalized log-determinant unit-root check."""

    order_used: int
    logdet_ratio: float
    statistic: float
    is_unit_root: bool
    threshold: float

    def summary(self) -> str:
        verdict = "unit root" if self.is_unit_root else "no unit root"
        labels = (
            "lag order used",
            "log-det / log T",
            "unit-root statistic",
            f"decision (>= {self.threshold:g})",
        )
        width = max(len(label) for label in labels)
        rows = (
            f"{self.order_used}",
            f"{self.logdet_ratio:.4f}",
            f"{self.statistic:.4f}",
            verdict,
        )
        return "\n".join(f"{l:<{width}} : {r}" for l, r in zip(labels, rows))


@dataclass(frozen=True)
class PlsReport:
    """Accumulated squared prediction error per candidate order."""

    criterion: dict[int, float]
    chosen: int
    t0: int

    def summary(self) -> str:
        lines = ["order  accumulated sq. prediction error"]
        for j in sorted(self.criterion):
            star = "  <-- chosen" if j == self.chosen else ""
            lines.append(f"{j:>5d}  {self.criterion[j]:.6g}{star}")
        return "\n".join(lines)


class LogSlopeFit(NamedTuple):
    slope: float
    r_squared: float


def excess_loss_coefficient(
    order: int,
    unit_root_mult: int = 0,
    neg_unit_root_mult: int = 0,
    complex_pair_mults: Sequence[int] = (),
) -> float:
    """Asymptotic coefficient of the accumulated excess loss on log T.

    For an AR(order) model whose unit-circle roots are +1 with multiplicity
    a, -1 with multiplicity b, and complex conjugate pairs with
    multiplicities d_k, the accumulated squared excess error grows like

        (order + a^2 + b^2 + 2 sum_k d_k^2) * sigma^2 * log T.

    Raises
    ------
    BadMultiplicityError
        If any multiplicity is negative or the unit-circle roots exceed the
        stated order (a + b + 2 sum_k d_k <= order must hold).
    """
    a, b = int(unit_root_mult), int(neg_unit_root_mult)
    ds = [int(d) for d in complex_pair_mults]
    if order < 0 or a < 0 or b < 0 or any(d < 1 for d in ds):
        raise BadMultiplicityError(
            f"negative order/multiplicity: order={order}, a={a}, b={b}, pairs={ds}"
        )
    if a + b + 2 * sum(ds) > order:
        raise BadMultiplicityError(
            f"unit-circle root count {a + b + 2 * sum(ds)} exceeds order {order}"
        )
    return float(order + a * a + b * b + 2 * sum(d * d for d in ds))


def logdet_ratio(values: Sequence[float] | NDArray[np.float64], order: int) -> float:
    """log det of the lag-vector Gram over t = order..T, divided by log T.

    Converges almost surely to ``order`` for a stable invertible model and
    gains the squared multiplicity of every unit-circle root, so a single
    unit root pushes it to order + 1.  Valid with ``order`` an upper bound
    on the true order as well.
    """
    y = np.asarray(values, dtype=float)
    if not isinstance(order, int) or order < 1:
        raise BadOrderError(f"order must be an integer >= 1, got {order!r}")
    if y.ndim != 1 or len(y) <= order:
        raise TooShortError(f"need more than {order} observations, got {len(y)}")
    if not np.all(np.isfinite(y)):
        raise ValueError("series contains non-finite values")
    windows = sliding_window_view(y, order)
    gram = windows.T @ windows
    try:
        ld = linalg.log_det(gram)
    except SingularMatrixError as exc:
        raise SingularGramError(f"lag-vector Gram is singular: {exc}") from exc
    return ld / math.log(len(y))


def unit_root_stat(
    values: Sequence[float] | NDArray[np.float64],
    order: int,
    threshold: float = UNIT_ROOT_THRESHOLD,
) -> UnitRootReport:
    """Unit-root statistic sqrt(max(0, logdet_ratio - order)).

    Near 1 in the presence of a unit root and near 0 for a stable model;
    ``threshold`` (default 0.5) splits the two.
    """
    ratio = logdet_ratio(values, order)
    stat = math.sqrt(max(0.0, ratio - order))
    return UnitRootReport(
        order_used=order,
        logdet_ratio=ratio,
        statistic=stat,
        is_unit_root=stat >= threshold,
        threshold=threshold,
    )


def pls_select(
    values: Sequence[float] | NDArray[np.float64],
    max_order: int,
    t0: int = DEFAULT_T0,
) -> PlsReport:
    """Order selection by accumulated squared one-step prediction error.

    Every candidate order j = 0..max_order is run through the expanding
    window evaluation (j = 0 is the constant-zero predictor) and the order
    with the smallest accumulated error wins; ties go to the smallest.
    """
    if not isinstance(max_order, int) or max_order < 1:
        raise BadOrderError(f"max_order must be an integer >= 1, got {max_order!r}")
    if not t0 > max_order:
        raise TooShortError(f"need t0 > max_order, got t0={t0}, max_order={max_order}")
    criterion: dict[int, float] = {}
    for j in range(max_order + 1):
        ledger = run_expanding_forecast(values, j, 0, t0, keep_records=False)
        criterion[j] = ledger.sum_sq_err
    chosen = min(criterion, key=lambda j: (criterion[j], j))
    return PlsReport(criterion=criterion, chosen=chosen, t0=t0)


def rmse_by_horizon(errors: Mapping[int, Sequence[float]], horizon: int) -> float:
    """Root mean squared error over all records at one horizon.

    The denominator is the record count at that horizon (horizons near the
    end of a sample have fewer origins, which is accounted for naturally).
    """
    if horizon not in errors:
        raise EmptyHorizonError(f"no records at horizon {horizon}")
    e = np.asarray(errors[horizon], dtype=float)
    if e.size == 0:
        raise EmptyHorizonError(f"no records at horizon {horizon}")
    return float(np.sqrt(np.mean(e * e)))


def fit_log_slope(
    sample_sizes: Sequence[int],
    losses: Sequence[float],
    t0: int,
) -> LogSlopeFit:
    """No-intercept least-squares fit of loss on log(T - t0).

    Returns the slope (the empirical growth coefficient) and
    R^2 = 1 - SSR / sum(loss^2), the no-intercept convention.
    """
    ts = [int(T) for T in sample_sizes]
    ys = np.asarray(losses, dtype=float)
    if len(ts) != len(ys):
        raise ValueError(f"got {len(ts)} sizes but {len(ys)} losses")
    if len(ts) < 2:
        raise DegenerateFitError(f"need at least 2 points, got {len(ts)}")
    if any(T <= t0 for T in ts):
        raise DegenerateFitError(f"every sample size must exceed t0={t0}")
    x = np.log(np.asarray(ts, dtype=float) - t0)
    sxx = float(x @ x)
    if sxx == 0.0:
        raise DegenerateFitError("all regressors are zero (sample sizes equal t0 + 1)")
    slope = float(x @ ys) / sxx
    resid = ys - slope * x
    ssr = float(resid @ resid)
    syy = float(ys @ ys)
    if syy > 0.0:
        r2 = 1.0 - ssr / syy
    else:
        r2 = 1.0 if ssr == 0.0 else 0.0
    return LogSlopeFit(slope=slope, r_squared=r2)
