"""Recursive least-squares forecasting of autoregressions with possible unit roots.

The package simulates autoregressive processes, runs expanding-window
least-squares one-step prediction with optional differencing, builds
multi-step forecasts (plug-in and direct), and measures how the
accumulated prediction loss in excess of the innovation noise grows with
the sample size.  Growth diagnostics expose an order-selection rule and a
unit-root check, and the Monte Carlo layer reproduces loss and RMSE
tables with seed-deterministic parallelism.
"""

from .ar import (
    ArCoefficients,
    ArProcess,
    NOISE_KINDS,
    RootFactorSpec,
    SeriesSample,
    Stability,
    StabilityReport,
    characteristic_polynomial,
    classify,
    coefficients_from_factors,
    companion_eigenvalues,
    companion_matrix,
    derive_seed,
    simulate,
)
from .diagnostics import (
    LogSlopeFit,
    PlsReport,
    UNIT_ROOT_THRESHOLD,
    UnitRootReport,
    excess_loss_coefficient,
    fit_log_slope,
    logdet_ratio,
    pls_select,
    rmse_by_horizon,
    unit_root_stat,
)
from .estimator import (
    DEFAULT_T0,
    LedgerTotals,
    LossLedger,
    LossRecord,
    RlsState,
    rls_new,
    rls_step,
    run_expanding_forecast,
)
from .exceptions import (
    ArforecastError,
    BadMultiplicityError,
    BadOrderError,
    DegenerateFitError,
    EmptyHorizonError,
    ShortHistoryError,
    SingularDesignError,
    SingularGramError,
    SingularMatrixError,
    TooShortError,
)
from .forecaster import (
    HorizonForecast,
    METHODS,
    PredictorSpec,
    direct_forecast,
    direct_forecast_path,
    h_step_error_variance,
    integrated_plugin_forecast,
    multistep_cost,
    plugin_forecast,
    psi_weights,
)
from .linalg import (
    SpdInverseTracker,
    SymMatrix,
    cholesky_factor,
    log_det,
    rank_one_update,
    solve_spd,
    spd_inverse,
)
from .montecarlo import (
    DEFAULT_PREDICTORS,
    DEFAULT_T_GRID,
    HorizonTableConfig,
    LossTableConfig,
    LossTableRun,
    TableResult,
    accumulate_horizon_sq_errors,
    rolling_table,
    run_horizon_table,
    run_loss_table,
)

__version__ = "0.1.0"

__all__ = [
    "ArCoefficients",
    "ArProcess",
    "ArforecastError",
    "BadMultiplicityError",
    "BadOrderError",
    "DEFAULT_PREDICTORS",
    "DEFAULT_T0",
    "DEFAULT_T_GRID",
    "DegenerateFitError",
    "EmptyHorizonError",
    "HorizonForecast",
    "HorizonTableConfig",
    "LedgerTotals",
    "LogSlopeFit",
    "LossLedger",
    "LossRecord",
    "LossTableConfig",
    "LossTableRun",
    "METHODS",
    "NOISE_KINDS",
    "PlsReport",
    "PredictorSpec",
    "RlsState",
    "RootFactorSpec",
    "SeriesSample",
    "ShortHistoryError",
    "SingularDesignError",
    "SingularGramError",
    "SingularMatrixError",
    "SpdInverseTracker",
    "Stability",
    "StabilityReport",
    "SymMatrix",
    "TableResult",
    "TooShortError",
    "UNIT_ROOT_THRESHOLD",
    "UnitRootReport",
    "accumulate_horizon_sq_errors",
    "characteristic_polynomial",
    "cholesky_factor",
    "classify",
    "coefficients_from_factors",
    "companion_eigenvalues",
    "companion_matrix",
    "derive_seed",
    "direct_forecast",
    "direct_forecast_path",
    "excess_loss_coefficient",
    "fit_log_slope",
    "h_step_error_variance",
    "integrated_plugin_forecast",
    "log_det",
    "logdet_ratio",
    "multistep_cost",
    "plugin_forecast",
    "pls_select",
    "psi_weights",
    "rank_one_update",
    "rls_new",
    "rls_step",
    "rmse_by_horizon",
    "rolling_table",
    "run_expanding_forecast",
    "run_horizon_table",
    "run_loss_table",
    "simulate",
    "solve_spd",
    "spd_inverse",
    "unit_root_stat",
]
