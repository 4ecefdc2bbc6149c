"""Expanding-window recursive least squares and its loss bookkeeping.

The centerpiece is :class:`RlsState`: an AR(p) regression

    y_t = beta_1 y_{t-1} + ... + beta_p y_{t-p} + eps_t

re-estimated after every observation via rank-one Gram updates, with an
optional unit root imposed (``diff=1``), in which case the regression runs
on first differences at order p-1 and predictions are integrated back to
the level scale (y_hat_t = y_{t-1} + predicted difference).

``step`` returns the one-step prediction of the incoming value *before*
ingesting it, which is what expanding-window evaluation needs: the ledger
of (y_t, y_hat_t, eps_t) triples accumulates both the ordinary squared
error and the squared excess error (y - y_hat - eps)^2, whose growth rate
separates stable from unit-root processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from numpy.typing import NDArray

from . import linalg
from .ar import SeriesSample
from .exceptions import BadOrderError, SingularMatrixError, TooShortError

__all__ = [
    "RlsState",
    "LossLedger",
    "LossRecord",
    "LedgerTotals",
    "rls_new",
    "rls_step",
    "run_expanding_forecast",
]

DEFAULT_T0 = 10


class LossRecord(NamedTuple):
    t: int
    y: float
    y_hat: float
    eps: float | None


class LedgerTotals(NamedTuple):
    n: int
    sum_sq_err: float
    sum_sq_innov: float
    excess_loss: float
    cross_term: float


@dataclass
class LossLedger:
    """Per-step forecast records and their running accumulators.

    sum_sq_err accumulates (y - y_hat)^2.  When innovations are supplied,
    excess_loss accumulates (y - y_hat - eps)^2, sum_sq_innov accumulates
    eps^2, and cross_term accumulates 2 (y - y_hat - eps) eps, so that

        sum_sq_err == sum_sq_innov + excess_loss + cross_term

    holds as a per-record algebraic identity (up to rounding).
    """

    keep_records: bool = True
    records: list[LossRecord] = field(default_factory=list)
    n: int = 0
    sum_sq_err: float = 0.0
    sum_sq_innov: float = 0.0
    excess_loss: float = 0.0
    cross_term: float = 0.0
    has_innovations: bool = True
    snapshots: dict[int, LedgerTotals] = field(default_factory=dict)

    def record(self, t: int, y: float, y_hat: float, eps: float | None = None) -> None:
        err = y - y_hat
        self.n += 1
        self.sum_sq_err += err * err
        if eps is None:
            self.has_innovations = False
        else:
            excess = err - eps
            self.sum_sq_innov += eps * eps
            self.excess_loss += excess * excess
            self.cross_term += 2.0 * excess * eps
        if self.keep_records:
            self.records.append(LossRecord(t, y, y_hat, eps))

    def totals(self) -> LedgerTotals:
        return LedgerTotals(
            self.n, self.sum_sq_err, self.sum_sq_innov, self.excess_loss, self.cross_term
        )

    def snapshot(self, t: int) -> None:
        self.snapshots[t] = self.totals()


class RlsState:
    """Recursively re-estimated least-squares predictor.

    Parameters
    ----------
    order : int
        Level-model order p (>= 1).
    diff : int
        0 for the unconstrained regression, 1 to impose one unit root:
        the regression then runs on first differences with p-1 lags, and
        order 1 with diff 1 degenerates to the parameter-free random-walk
        predictor y_hat_{t+1} = y_t.
    fit_intercept : bool
        When True the regression gains a constant column, so the fitted
        equation is stream_t = c + b_1 stream_{t-1} + ... + b_q stream_{t-q}.
        With diff=1 and order 1 this is the drift-only random walk.  The
        default False keeps the pure lag regression.
    refactor_interval : int
        Rank-one updates between full refactorizations of the Gram inverse.

    Until the Gram matrix of the regression stream passes the pivot
    tolerance the state is not estimable and the regression prediction is
    0 by convention (for diff=1 that convention applies to the predicted
    difference, so the level prediction is the previous value).
    """

    def __init__(
        self,
        order: int,
        diff: int = 0,
        fit_intercept: bool = False,
        refactor_interval: int = linalg.REFACTOR_INTERVAL,
    ):
        if not isinstance(order, int) or order < 1:
            raise BadOrderError(f"order must be an integer >= 1, got {order!r}")
        if diff not in (0, 1):
            raise ValueError(f"diff must be 0 or 1, got {diff!r}")
        self.order = order
        self.diff = diff
        self.fit_intercept = bool(fit_intercept)
        self._q = order - diff
        self._dim = self._q + (1 if self.fit_intercept else 0)
        self._refactor_interval = refactor_interval
        q, dim = self._q, self._dim
        self.t = 0
        self.n_equations = 0
        self.estimable = dim == 0
        self._last_level: float | None = None
        self._reg = np.zeros(q)
        self._reg_count = 0
        self._gram = np.zeros((dim, dim))
        self._cross = np.zeros(dim)
        self._beta = np.zeros(dim)
        self._vec = np.zeros(dim)
        if self.fit_intercept:
            self._vec[0] = 1.0
        self._tracker: linalg.SpdInverseTracker | None = None

    @property
    def beta_hat(self) -> NDArray[np.float64]:
        """Current coefficient estimate for the regression stream.

        With ``fit_intercept=True`` the intercept occupies index 0 and the
        lag coefficients follow; otherwise the vector holds the q lag
        coefficients only.
        """
        return self._beta.copy()

    @property
    def gram(self) -> linalg.SymMatrix:
        return linalg.SymMatrix(self._gram)

    @property
    def cross(self) -> NDArray[np.float64]:
        return self._cross.copy()

    @property
    def inv_gram(self) -> linalg.SymMatrix | None:
        if self._tracker is None:
            return None
        return linalg.SymMatrix(self._tracker.inverse)

    @property
    def log_det_gram(self) -> float:
        """Log-determinant of the regression Gram (NaN until estimable)."""
        if self._tracker is None:
            return math.nan
        return self._tracker.log_det

    def _equation_vector(self) -> NDArray[np.float64]:
        if not self.fit_intercept:
            return self._reg
        self._vec[1:] = self._reg
        return self._vec

    def predict_next(self) -> float:
        """One-step prediction of the next observation, without ingesting."""
        ready = self.estimable and self._reg_count >= self._q and self._dim > 0
        if self.diff == 0:
            if ready:
                return float(self._beta @ self._equation_vector())
            return 0.0
        if self._last_level is None:
            return 0.0
        inc = float(self._beta @ self._equation_vector()) if ready else 0.0
        return self._last_level + inc

    def step(self, y: float, eps: float | None = None) -> float:
        """Predict the incoming observation, then ingest it.

        Returns the prediction of ``y`` made from all earlier data.  ``eps``
        is accepted for signature symmetry with the evaluation drivers; the
        estimate itself never uses it.
        """
        y = float(y)
        if not math.isfinite(y):
            raise ValueError(f"non-finite observation at t={self.t + 1}")
        prediction = self.predict_next()
        # Regression-stream value: the level itself, or its first difference.
        if self.diff == 0:
            stream: float | None = y
        elif self._last_level is not None:
            stream = y - self._last_level
        else:
            stream = None
        if stream is not None and self._dim > 0:
            if self._reg_count >= self._q:
                self._ingest_equation(stream)
            if self._q > 0:
                reg = self._reg
                if self._q > 1:
                    reg[1:] = reg[:-1]
                reg[0] = stream
            self._reg_count += 1
        self._last_level = y
        self.t += 1
        return prediction

    def _ingest_equation(self, target: float) -> None:
        vec = self._equation_vector()
        self._cross += vec * target
        self.n_equations += 1
        if self._tracker is not None:
            self._tracker.update(vec)
            self._gram = self._tracker.matrix
            self._beta = self._tracker.inverse @ self._cross
            return
        self._gram += np.outer(vec, vec)
        if self.n_equations >= self._dim:
            try:
                tracker = linalg.SpdInverseTracker(
                    self._gram, refactor_interval=self._refactor_interval
                )
            except SingularMatrixError:
                return
            self._tracker = tracker
            self._gram = tracker.matrix
            self.estimable = True
            self._beta = tracker.inverse @ self._cross


def rls_new(order: int, diff: int = 0, fit_intercept: bool = False) -> RlsState:
    """Fresh estimator state (thin constructor wrapper)."""
    return RlsState(order, diff, fit_intercept=fit_intercept)


def rls_step(state: RlsState, y: float, eps: float | None = None) -> tuple[float, RlsState]:
    """Functional-style step: returns (prediction, state). Mutates state."""
    return state.step(y, eps), state


def _series_arrays(
    series: SeriesSample | Sequence[float] | NDArray[np.float64],
    innovations: Sequence[float] | None,
) -> tuple[NDArray[np.float64], NDArray[np.float64] | None]:
    if isinstance(series, SeriesSample):
        values = np.asarray(series.values, dtype=float)
        if innovations is None:
            innovations = series.innovations
    else:
        values = np.asarray(series, dtype=float)
    if values.ndim != 1:
        raise ValueError(f"expected a 1-D series, got shape {values.shape}")
    eps = None
    if innovations is not None:
        eps = np.asarray(innovations, dtype=float)
        if eps.shape != values.shape:
            raise ValueError(
                f"innovations shape {eps.shape} does not match series shape {values.shape}"
            )
    return values, eps


def run_expanding_forecast(
    series: SeriesSample | Sequence[float] | NDArray[np.float64],
    order: int,
    diff: int = 0,
    t0: int = DEFAULT_T0,
    innovations: Sequence[float] | None = None,
    keep_records: bool = True,
    checkpoints: Iterable[int] | None = None,
    fit_intercept: bool = False,
) -> LossLedger:
    """Expanding-window one-step evaluation over t = t0+1, ..., T.

    The model is re-estimated after every observation and each y_t with
    t > t0 is predicted from data up to t-1 (prediction 0, or the previous
    value when diff=1, while the regression is not yet estimable).  Order 0
    with diff=0 is the constant-zero predictor, the natural baseline for
    order selection.  ``fit_intercept`` adds a constant column to the
    recursive regression (see :class:`RlsState`).

    ``checkpoints`` takes intermediate times at which the running ledger
    totals are snapshotted into ``ledger.snapshots``; a snapshot at time c
    equals the totals of a separate run on the length-c prefix, because the
    expanding estimate at time t uses data up to t only.

    Raises
    ------
    TooShortError
        Unless series length > t0 > order.
    BadOrderError
        For negative order, or order 0 combined with diff=1.
    """
    values, eps = _series_arrays(series, innovations)
    if not isinstance(order, int) or order < 0:
        raise BadOrderError(f"order must be an integer >= 0, got {order!r}")
    if order == 0 and diff != 0:
        raise BadOrderError("order 0 requires diff=0")
    if order == 0 and fit_intercept:
        raise BadOrderError("order 0 is the constant-zero baseline; it takes no intercept")
    n = len(values)
    if not (n > t0 > order):
        raise TooShortError(
            f"need series length > t0 > order, got length={n}, t0={t0}, order={order}"
        )
    marks = sorted(set(int(c) for c in checkpoints)) if checkpoints else []
    for c in marks:
        if not (t0 < c <= n):
            raise ValueError(f"checkpoint {c} outside (t0, length] = ({t0}, {n}]")
    state = RlsState(order, diff, fit_intercept=fit_intercept) if order >= 1 else None
    ledger = LossLedger(keep_records=keep_records)
    mark_ix = 0
    for i in range(n):
        y = float(values[i])
        e = float(eps[i]) if eps is not None else None
        pred = state.step(y, e) if state is not None else 0.0
        t = i + 1
        if t > t0:
            ledger.record(t, y, pred, e)
        if mark_ix < len(marks) and marks[mark_ix] == t:
            ledger.snapshot(t)
            mark_ix += 1
    return ledger
