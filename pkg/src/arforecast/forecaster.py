"""Multi-step forecasters: plug-in recursion and direct per-horizon regression.

The plug-in forecaster iterates the fitted one-step recursion, substituting
forecasts for unobserved lags (the classical psi-weight expansion underlies
its error variance).  The direct forecaster fits a separate regression of
y_t on (y_{t-h}, ..., y_{t-h-p+1}) for each horizon h and applies it once
at the origin; it needs no nonlinear optimization, and the exact multi-step
squared-error criterion is exposed only as an evaluation functional.

Forecasts under one imposed unit root (``diff=1``) are built on first
differences at order p-1 and integrated back to the level scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from . import linalg
from .ar import ArCoefficients
from .exceptions import ShortHistoryError, SingularDesignError, SingularMatrixError

__all__ = [
    "PredictorSpec",
    "HorizonForecast",
    "plugin_forecast",
    "integrated_plugin_forecast",
    "psi_weights",
    "h_step_error_variance",
    "direct_forecast",
    "direct_forecast_path",
    "multistep_cost",
]

METHODS = ("plugin", "direct")


@dataclass(frozen=True)
class PredictorSpec:
    """A forecasting recipe: level order, unit roots imposed, method."""

    order: int
    diff: int = 0
    method: str = "plugin"

    def __post_init__(self):
        if not isinstance(self.order, int) or self.order < 1:
            raise ValueError(f"order must be an integer >= 1, got {self.order!r}")
        if self.diff not in (0, 1):
            raise ValueError(f"diff must be 0 or 1, got {self.diff!r}")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")

    def label(self) -> str:
        return f"p={self.order} d={self.diff}" + ("" if self.method == "plugin" else " direct")


@dataclass(frozen=True, eq=False)
class HorizonForecast:
    """Forecast path y_hat_{origin+1..origin+h} from a fixed origin."""

    origin: int
    values: NDArray[np.float64]

    @property
    def horizon(self) -> int:
        return len(self.values)


def _coeff_tuple(coeffs: ArCoefficients | Sequence[float]) -> tuple[float, ...]:
    if isinstance(coeffs, ArCoefficients):
        return coeffs.beta
    return tuple(float(b) for b in np.asarray(coeffs, dtype=float))


def plugin_forecast(
    coeffs: ArCoefficients | Sequence[float],
    history: Sequence[float] | NDArray[np.float64],
    horizon: int,
    intercept: float = 0.0,
) -> HorizonForecast:
    """Iterate the fitted recursion ``horizon`` steps past the history.

    Each step uses observed values while the lag reaches into the history
    and previously generated forecasts beyond it; a nonzero ``intercept``
    enters every step of the recursion.

    Raises
    ------
    ShortHistoryError
        If fewer observations than coefficients are supplied.
    """
    beta = _coeff_tuple(coeffs)
    p = len(beta)
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    hist = np.asarray(history, dtype=float)
    if hist.ndim != 1 or len(hist) < p:
        raise ShortHistoryError(f"need at least {p} observations, got {len(hist)}")
    path = hist[len(hist) - p :].tolist() if p else []
    out = np.empty(horizon)
    for j in range(horizon):
        acc = float(intercept)
        for k in range(p):
            acc += beta[k] * path[-1 - k]
        path.append(acc)
        out[j] = acc
    return HorizonForecast(origin=len(hist), values=out)


def integrated_plugin_forecast(
    diff_coeffs: ArCoefficients | Sequence[float],
    history: Sequence[float] | NDArray[np.float64],
    horizon: int,
    intercept: float = 0.0,
) -> HorizonForecast:
    """Plug-in forecast with one unit root imposed.

    ``diff_coeffs`` is the fit on first differences; the forecast path of
    differences is accumulated onto the last observed level.  A nonzero
    ``intercept`` acts as a drift in the difference recursion.
    """
    beta = _coeff_tuple(diff_coeffs)
    q = len(beta)
    hist = np.asarray(history, dtype=float)
    if hist.ndim != 1 or len(hist) < q + 1:
        raise ShortHistoryError(f"need at least {q + 1} observations, got {len(hist)}")
    if q == 0:
        diffs = np.full(horizon, float(intercept))
    else:
        diffs = plugin_forecast(beta, np.diff(hist), horizon, intercept).values
    return HorizonForecast(origin=len(hist), values=hist[-1] + np.cumsum(diffs))


def psi_weights(coeffs: ArCoefficients | Sequence[float], count: int) -> NDArray[np.float64]:
    """First ``count`` moving-average weights of the recursion.

    psi_0 = 1 and psi_j = sum_{k=1..min(j,p)} beta_k psi_{j-k}; for a
    stable model these decay geometrically, for a unit-root model they
    plateau, and their squared partial sums give multi-step error
    variances.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    beta = _coeff_tuple(coeffs)
    p = len(beta)
    psi = np.empty(count)
    psi[0] = 1.0
    for j in range(1, count):
        acc = 0.0
        for k in range(1, min(j, p) + 1):
            acc += beta[k - 1] * psi[j - k]
        psi[j] = acc
    return psi


def h_step_error_variance(
    coeffs: ArCoefficients | Sequence[float], horizon: int, sigma: float = 1.0
) -> float:
    """Error variance of the true-parameter h-step forecast:
    sigma^2 * (psi_0^2 + ... + psi_{h-1}^2)."""
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    if not (sigma > 0) or not math.isfinite(sigma):
        raise ValueError(f"sigma must be positive and finite, got {sigma}")
    psi = psi_weights(coeffs, horizon)
    return float(sigma * sigma * np.sum(psi * psi))


def _direct_fit(
    values: NDArray[np.float64], order: int, horizon: int, fit_intercept: bool = False
) -> NDArray[np.float64]:
    # Normal-equations fit of y_t on (y_{t-h}, ..., y_{t-h-p+1}), with an
    # optional leading constant column.
    p, h = order, horizon
    n = len(values)
    n_rows = n - h - p + 1
    targets = values[h + p - 1 :]
    extra = 1 if fit_intercept else 0
    design = np.empty((n_rows, p + extra))
    if fit_intercept:
        design[:, 0] = 1.0
    for k in range(p):
        design[:, k + extra] = values[p - 1 - k : p - 1 - k + n_rows]
    try:
        return linalg.solve_spd(design.T @ design, design.T @ targets)
    except SingularMatrixError as exc:
        raise SingularDesignError(
            f"direct design at horizon {h} is singular: {exc}"
        ) from exc


def direct_forecast(
    values: Sequence[float] | NDArray[np.float64],
    order: int,
    horizon: int,
    diff: int = 0,
    fit_intercept: bool = False,
) -> float:
    """Direct (per-horizon regression) forecast of y_{T+horizon}.

    With ``diff=1`` each of the ``horizon`` difference forecasts comes from
    its own horizon-specific regression on first differences at order p-1,
    and the forecast is the last level plus their sum.  ``fit_intercept``
    adds a constant column to every per-horizon regression.

    Raises
    ------
    ShortHistoryError
        Unless len(values) >= horizon + order + 5, so every regression
        keeps a few degrees of freedom.
    SingularDesignError
        When a design Gram fails the pivot tolerance (no ridge fallback).
    """
    return float(direct_forecast_path(values, order, horizon, diff, fit_intercept)[-1])


def direct_forecast_path(
    values: Sequence[float] | NDArray[np.float64],
    order: int,
    horizon: int,
    diff: int = 0,
    fit_intercept: bool = False,
) -> NDArray[np.float64]:
    """Direct forecasts for every step 1..horizon (one regression each)."""
    y = np.asarray(values, dtype=float)
    if not isinstance(order, int) or order < 1:
        raise ValueError(f"order must be an integer >= 1, got {order!r}")
    if diff not in (0, 1):
        raise ValueError(f"diff must be 0 or 1, got {diff!r}")
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    if y.ndim != 1 or len(y) < horizon + order + 5:
        raise ShortHistoryError(
            f"need at least horizon + order + 5 = {horizon + order + 5} observations, "
            f"got {len(y)}"
        )
    extra = 1 if fit_intercept else 0
    if diff == 0:
        out = np.empty(horizon)
        anchor = np.concatenate([np.ones(extra), y[-1 : -order - 1 : -1]])
        for h in range(1, horizon + 1):
            out[h - 1] = _direct_fit(y, order, h, fit_intercept) @ anchor
        return out
    q = order - 1
    w = np.diff(y)
    steps = np.empty(horizon)
    if q == 0 and not fit_intercept:
        steps[:] = 0.0
    else:
        anchor = np.concatenate([np.ones(extra), w[-1 : -q - 1 : -1]])
        for h in range(1, horizon + 1):
            steps[h - 1] = _direct_fit(w, q, h, fit_intercept) @ anchor
    return y[-1] + np.cumsum(steps)


def multistep_cost(
    values: Sequence[float] | NDArray[np.float64],
    coeffs: ArCoefficients | Sequence[float],
    horizon: int,
) -> float:
    """Exact multi-step squared-error criterion of a candidate coefficient
    vector: sum over origins t of (y_{t+h} - plug-in h-step forecast)^2.

    This is the quantity a nonlinear multi-step fit would minimize; it is
    exposed for evaluation only.
    """
    beta = _coeff_tuple(coeffs)
    p = len(beta)
    y = np.asarray(values, dtype=float)
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    n = len(y)
    if n < p + horizon:
        raise ShortHistoryError(
            f"need at least order + horizon = {p + horizon} observations, got {n}"
        )
    total = 0.0
    for t in range(max(p, 1), n - horizon + 1):
        pred = plugin_forecast(beta, y[:t], horizon).values[-1]
        err = y[t + horizon - 1] - pred
        total += err * err
    return total
