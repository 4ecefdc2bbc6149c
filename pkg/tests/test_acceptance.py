"""Scored acceptance checks with pinned reference values.

Every check states its tolerance next to the pinned constant and prints
one measured-versus-target line, so a failure names the exact quantity
that moved.  Expensive Monte Carlo runs are shared per module scope.

Check 03b is expected to fail: the pinned mean squared error implies an
innovation second moment about 5% above 1 (1076.76 = 1.0507 * 990 + 36.55
decomposes the pinned value into its noise floor and excess parts), while
this package simulates unit-variance innovations, for which the expected
value is (T - t0) * sigma^2 + C_T, roughly 1024 here.  The companion
checks 01, 02, and 03a pin the same experiment and pass, so the gap is a
scale convention in the reference value, not an estimator defect.
"""

import time

import numpy as np
import numpy.testing as npt
import pytest

from arforecast.ar import (
    ArCoefficients,
    ArProcess,
    RootFactorSpec,
    coefficients_from_factors,
    derive_seed,
    simulate,
)
from arforecast.cli import main
from arforecast.diagnostics import logdet_ratio, pls_select, unit_root_stat
from arforecast.estimator import RlsState, run_expanding_forecast
from arforecast.forecaster import PredictorSpec
from arforecast.montecarlo import (
    HorizonTableConfig,
    LossTableConfig,
    run_horizon_table,
    run_loss_table,
)

MODEL_ONE = RootFactorSpec(((0.5, 2), (1.0, 1)))
MODEL_TWO = RootFactorSpec(((0.5, 2), (0.99, 1)))
MODEL_FOUR = RootFactorSpec(((0.5, 3),))

LOSS_SEED = 1234
LOSS_REPS = 500
HORIZON_SEED = 1234
HORIZON_REPS = 300


def _report(label: str, ok: bool, detail: str) -> None:
    print(f"acceptance {label}: {'PASS' if ok else 'FAIL'}  ({detail})")


@pytest.fixture(scope="module")
def loss_run():
    start = time.perf_counter()
    run = run_loss_table(
        LossTableConfig(MODEL_ONE, master_seed=LOSS_SEED, replications=LOSS_REPS)
    )
    return run, time.perf_counter() - start


@pytest.fixture(scope="module")
def horizon_ratios():
    def ratios(factors):
        cfg = HorizonTableConfig(
            factors,
            master_seed=HORIZON_SEED,
            replications=HORIZON_REPS,
            predictors=(PredictorSpec(3, 0), PredictorSpec(3, 1)),
        )
        table = run_horizon_table(cfg)
        col = table.columns.index("ratio p=3 d=1")
        return {h: table.values[i, col] for i, h in enumerate(table.row_labels)}

    return ratios


class TestCriterion01LossTableReplica:
    TARGETS = {
        0: {100: 23.47, 500: 32.75, 1000: 36.55},
        1: {100: 12.33, 500: 17.73, 1000: 19.94},
    }

    def test_criterion_01_accumulated_excess_loss_cells(self, loss_run):
        run, elapsed = loss_run
        grid = list(run.excess.row_labels)
        ok = True
        details = []
        for di, d in enumerate((0, 1)):
            for T, target in self.TARGETS[d].items():
                got = run.excess.values[grid.index(T), di]
                details.append(f"d={d} T={T}: {got:.2f} vs {target} +-10%")
                ok = ok and abs(got - target) <= 0.10 * target
        ok = ok and elapsed < 300.0
        _report("01 loss-table cells", ok, "; ".join(details) + f"; {elapsed:.0f}s")
        for di, d in enumerate((0, 1)):
            for T, target in self.TARGETS[d].items():
                got = run.excess.values[grid.index(T), di]
                assert abs(got - target) <= 0.10 * target, (d, T, got, target)
        assert elapsed < 300.0


class TestCriterion02LossGrowthSlope:
    def test_criterion_02_log_growth_slopes(self, loss_run):
        run, _ = loss_run
        s0, s1 = run.slope["d=0"], run.slope["d=1"]
        r2 = run.r_squared["d=0"]
        ok = (
            abs(s0 - 5.2849) <= 0.528
            and abs(s1 - 2.8583) <= 0.286
            and r2 >= 0.98
        )
        _report(
            "02 growth slopes",
            ok,
            f"d=0 {s0:.4f} vs 5.2849 +-10%; d=1 {s1:.4f} vs 2.8583 +-10%; r2 {r2:.5f} >= 0.98",
        )
        assert abs(s0 - 5.2849) <= 0.10 * 5.2849
        assert abs(s1 - 2.8583) <= 0.10 * 2.8583
        assert r2 >= 0.98


class TestCriterion03SquaredErrorReplica:
    def test_criterion_03a_ledger_identity(self):
        process = ArProcess(coefficients_from_factors(MODEL_ONE), sigma=1.0)
        sample = simulate(process, 1000, derive_seed(LOSS_SEED, 0, 0))
        ledger = run_expanding_forecast(sample, 3, 0, 10, fit_intercept=True)
        tot = ledger.totals()
        lhs = tot.sum_sq_err - tot.sum_sq_innov - tot.excess_loss
        scale = max(abs(tot.sum_sq_err), 1.0)
        ok = abs(lhs - tot.cross_term) <= 1e-9 * scale
        _report(
            "03a ledger identity",
            ok,
            f"|({tot.sum_sq_err:.6f}) - ({tot.sum_sq_innov:.6f}) - ({tot.excess_loss:.6f})"
            f" - cross| = {abs(lhs - tot.cross_term):.2e} <= 1e-9 rel",
        )
        assert abs(lhs - tot.cross_term) <= 1e-9 * scale

    def test_criterion_03b_mean_squared_error_cell(self, loss_run):
        # Expected to fail with unit-variance innovations; see module
        # docstring for the decomposition of the pinned value.
        run, _ = loss_run
        grid = list(run.excess.row_labels)
        got = run.mse.values[grid.index(1000), 0]
        target = 1076.76
        ok = abs(got - target) <= 0.03 * target
        _report(
            "03b mse cell",
            ok,
            f"d=0 T=1000: {got:.2f} vs {target} +-3% [{0.97 * target:.2f}, {1.03 * target:.2f}]",
        )
        assert abs(got - target) <= 0.03 * target, (
            f"measured {got:.2f} outside [{0.97 * target:.2f}, {1.03 * target:.2f}]; "
            "consistent with (T - t0) + C_T under unit-variance innovations "
            f"(= {990 + run.excess.values[grid.index(1000), 0]:.2f})"
        )


class TestCriterion04OverdifferencedRatio:
    def test_criterion_04_stable_model_ratio(self, horizon_ratios):
        rows = horizon_ratios(MODEL_FOUR)
        ok = abs(rows[60] - 155.33) <= 10.0 and abs(rows[1] - 105.23) <= 3.0
        _report(
            "04 over-differenced ratio",
            ok,
            f"h=60 {rows[60]:.2f} vs 155.33 +-10; h=1 {rows[1]:.2f} vs 105.23 +-3",
        )
        assert abs(rows[60] - 155.33) <= 10.0
        assert abs(rows[1] - 105.23) <= 3.0


class TestCriterion05NearUnitRootRatio:
    def test_criterion_05_near_unit_root_ratio(self, horizon_ratios):
        rows = horizon_ratios(MODEL_TWO)
        targets = {1: 99.91, 20: 100.98, 60: 110.20}
        ok = all(abs(rows[h] - t) <= 3.0 for h, t in targets.items())
        _report(
            "05 near-unit-root ratio",
            ok,
            "; ".join(f"h={h} {rows[h]:.2f} vs {t} +-3" for h, t in targets.items()),
        )
        for h, t in targets.items():
            assert abs(rows[h] - t) <= 3.0, (h, rows[h], t)


class TestCriterion06OracleEquivalence:
    def test_criterion_06_recursive_matches_batch(self):
        start = time.perf_counter()
        rng = np.random.default_rng(20260822)
        worst_beta = 0.0
        worst_logdet = 0.0
        for _ in range(100):
            p = int(rng.integers(1, 6))
            n = int(rng.integers(50, 401))
            stable = [(float(r), 1) for r in rng.uniform(-0.85, 0.85, size=p)]
            if rng.random() < 0.5 and p >= 1:
                stable[0] = (1.0, 1)
            coeffs = coefficients_from_factors(RootFactorSpec(tuple(stable)))
            sample = simulate(
                ArProcess(coeffs, sigma=1.0), n, int(rng.integers(0, 2**31))
            )
            values = sample.values
            state = RlsState(p)
            for v in values:
                state.step(v)
            rows = np.array(
                [values[t - 1 : t - p - 1 : -1] if t - p - 1 >= 0 else values[t - 1 :: -1]
                 for t in range(p, n)]
            )[:, :p]
            targets = values[p:]
            gram = rows.T @ rows
            batch = np.linalg.solve(gram, rows.T @ targets)
            worst_beta = max(worst_beta, float(np.max(np.abs(state.beta_hat - batch))))
            sign, recomputed = np.linalg.slogdet(gram)
            assert sign > 0
            worst_logdet = max(worst_logdet, abs(state.log_det_gram - recomputed))
        elapsed = time.perf_counter() - start
        ok = worst_beta <= 1e-8 and worst_logdet <= 1e-6 and elapsed < 30.0
        _report(
            "06 oracle equivalence",
            ok,
            f"max |beta dev| {worst_beta:.2e} <= 1e-8; "
            f"max |logdet dev| {worst_logdet:.2e} <= 1e-6; {elapsed:.1f}s < 30s",
        )
        assert worst_beta <= 1e-8
        assert worst_logdet <= 1e-6
        assert elapsed < 30.0


class TestCriterion07GramGrowthCoefficient:
    def test_criterion_07_median_logdet_ratio(self):
        factors = RootFactorSpec(((1.0, 1), (-1.0, 1), (0.5, 1)))
        process = ArProcess(coefficients_from_factors(factors), sigma=1.0)
        ratios = [
            logdet_ratio(simulate(process, 5000, derive_seed(4242, s, 0)).values, 3)
            for s in range(100)
        ]
        med = float(np.median(ratios))
        ok = abs(med - 5.0) <= 0.5
        _report("07 gram growth", ok, f"median logdet ratio {med:.3f} vs 5 +-0.5")
        assert abs(med - 5.0) <= 0.5


class TestCriterion08UnitRootSeparation:
    def test_criterion_08_classification_rates(self):
        walk = ArProcess(ArCoefficients((1.0,)), sigma=1.0)
        stable = ArProcess(ArCoefficients((0.5,)), sigma=1.0)
        detected = sum(
            unit_root_stat(simulate(walk, 10000, derive_seed(777, s, 0)).values, 1).is_unit_root
            for s in range(100)
        )
        cleared = sum(
            not unit_root_stat(
                simulate(stable, 10000, derive_seed(888, s, 0)).values, 1
            ).is_unit_root
            for s in range(100)
        )
        ok = detected >= 95 and cleared >= 95
        _report(
            "08 unit-root separation",
            ok,
            f"random walk detected {detected}/100; stable cleared {cleared}/100; need >= 95",
        )
        assert detected >= 95
        assert cleared >= 95


class TestCriterion09OrderSelection:
    def test_criterion_09_order_selection_rate(self):
        process = ArProcess(coefficients_from_factors(MODEL_FOUR), sigma=1.0)
        hits = sum(
            pls_select(simulate(process, 2000, derive_seed(31415, s, 0)).values, 5).chosen == 3
            for s in range(200)
        )
        ok = hits >= 160
        _report("09 order selection", ok, f"order 3 chosen {hits}/200; need >= 160")
        assert hits >= 160


class TestCriterion10Determinism:
    def test_criterion_10_worker_count_invariance(self, tmp_path, capsys):
        args = (
            "ct-table", "--factors", "0.5^2,1.0", "--R", "24", "--seed", "4",
            "--t-grid", "60,120",
        )
        serial = tmp_path / "serial.csv"
        pooled = tmp_path / "pooled.csv"
        assert main([*args, "--workers", "1", "--out", str(serial)]) == 0
        assert main([*args, "--workers", "8", "--out", str(pooled)]) == 0
        capsys.readouterr()
        ok = serial.read_bytes() == pooled.read_bytes()
        _report("10 determinism", ok, "workers 1 vs 8 CSV byte-identical")
        assert ok
