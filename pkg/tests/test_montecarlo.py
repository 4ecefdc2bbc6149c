"""Tests for the Monte Carlo tables and the expanding-origin evaluation."""

import numpy as np
import numpy.testing as npt
import pytest

from arforecast.ar import ArProcess, RootFactorSpec, coefficients_from_factors, derive_seed, simulate
from arforecast.estimator import RlsState, run_expanding_forecast
from arforecast.exceptions import TooShortError
from arforecast.forecaster import PredictorSpec, integrated_plugin_forecast, plugin_forecast
from arforecast.montecarlo import (
    HorizonTableConfig,
    LossTableConfig,
    TableResult,
    accumulate_horizon_sq_errors,
    rolling_table,
    run_horizon_table,
    run_loss_table,
)

UNIT_ROOT_FACTORS = RootFactorSpec(((0.5, 2), (1.0, 1)))


class TestTableResult:
    @staticmethod
    def sample_table():
        return TableResult(
            row_name="T",
            row_labels=[100, 200],
            columns=["d=0", "d=1"],
            values=np.array([[1.0 / 3.0, 2.0], [np.pi, 4.5]]),
            extra_rows=[("slope", (0.123456789, 5.0))],
            meta={"replications": 7},
        )

    def test_csv_round_trip_is_lossless(self):
        table = self.sample_table()
        lines = table.to_csv().strip().split("\n")
        assert lines[0] == "T,d=0,d=1"
        parsed = [[float(c) for c in ln.split(",")[1:]] for ln in lines[1:3]]
        npt.assert_array_equal(np.array(parsed), table.values)
        assert float(lines[3].split(",")[1]) == 0.123456789

    def test_csv_excludes_metadata(self):
        assert "replications" not in self.sample_table().to_csv()

    def test_text_uses_requested_decimals(self):
        text = self.sample_table().to_text()
        assert "0.33" in text
        assert "3.14" in text
        assert "0.1235" in text  # summary rows carry extra digits
        columns = [ln.split() for ln in text.strip().split("\n")]
        assert all(len(c) == 3 for c in columns)


class TestLossTableConfigValidation:
    def test_rejects_zero_replications(self):
        with pytest.raises(ValueError):
            LossTableConfig(UNIT_ROOT_FACTORS, 1, t_grid=(100,), replications=0)

    def test_rejects_empty_grid(self):
        with pytest.raises(ValueError):
            LossTableConfig(UNIT_ROOT_FACTORS, 1, t_grid=())

    def test_rejects_unsorted_grid(self):
        with pytest.raises(ValueError):
            LossTableConfig(UNIT_ROOT_FACTORS, 1, t_grid=(200, 100))

    def test_rejects_bad_d_variants(self):
        with pytest.raises(ValueError):
            LossTableConfig(UNIT_ROOT_FACTORS, 1, t_grid=(100,), d_variants=(2,))
        with pytest.raises(ValueError):
            LossTableConfig(UNIT_ROOT_FACTORS, 1, t_grid=(100,), d_variants=(0, 0))

    def test_rejects_t0_not_above_order(self):
        with pytest.raises(ValueError):
            LossTableConfig(UNIT_ROOT_FACTORS, 1, t_grid=(100,), t0=3)

    def test_rejects_grid_below_t0(self):
        with pytest.raises(ValueError):
            LossTableConfig(UNIT_ROOT_FACTORS, 1, t_grid=(10, 100), t0=10)

    def test_order_defaults_to_factor_order(self):
        cfg = LossTableConfig(UNIT_ROOT_FACTORS, 1, t_grid=(100,))
        assert cfg.order == 3
        assert LossTableConfig(UNIT_ROOT_FACTORS, 1, t_grid=(100,), fit_order=5).order == 5


class TestRunLossTable:
    def test_zero_noise_table_is_zero(self):
        cfg = LossTableConfig(
            UNIT_ROOT_FACTORS, master_seed=3, t_grid=(50, 100), replications=1, noise="none"
        )
        run = run_loss_table(cfg)
        npt.assert_array_equal(run.excess.values, np.zeros((2, 2)))
        npt.assert_array_equal(run.mse.values, np.zeros((2, 2)))

    def test_cells_match_manual_composition(self):
        cfg = LossTableConfig(
            UNIT_ROOT_FACTORS, master_seed=91, t_grid=(60, 120), replications=2
        )
        assert cfg.fit_intercept
        run = run_loss_table(cfg)
        process = cfg.process()
        manual = np.zeros((2, 2, 2))
        for rep in range(2):
            sample = simulate(process, 120, derive_seed(91, rep, 0))
            for di, d in enumerate((0, 1)):
                ledger = run_expanding_forecast(
                    sample,
                    3,
                    d,
                    10,
                    keep_records=False,
                    checkpoints=(60, 120),
                    fit_intercept=True,
                )
                for ti, T in enumerate((60, 120)):
                    snap = ledger.snapshots[T]
                    manual[ti, di] += (snap.excess_loss, snap.sum_sq_err)
        manual /= 2
        npt.assert_array_equal(run.excess.values, manual[:, :, 0])
        npt.assert_array_equal(run.mse.values, manual[:, :, 1])

    def test_intercept_flag_changes_the_table(self):
        kwargs = dict(master_seed=91, t_grid=(60, 120), replications=2)
        with_c = run_loss_table(LossTableConfig(UNIT_ROOT_FACTORS, **kwargs))
        without = run_loss_table(
            LossTableConfig(UNIT_ROOT_FACTORS, fit_intercept=False, **kwargs)
        )
        assert not np.array_equal(with_c.excess.values, without.excess.values)
        process = LossTableConfig(UNIT_ROOT_FACTORS, **kwargs).process()
        manual = np.zeros((2, 2))
        for rep in range(2):
            sample = simulate(process, 120, derive_seed(91, rep, 0))
            for di, d in enumerate((0, 1)):
                ledger = run_expanding_forecast(
                    sample, 3, d, 10, keep_records=False, checkpoints=(60, 120)
                )
                manual[0, di] += ledger.snapshots[60].excess_loss
                manual[1, di] += ledger.snapshots[120].excess_loss
        npt.assert_array_equal(without.excess.values, manual / 2)

    def test_independent_draws_differ_from_shared_path(self):
        shared = LossTableConfig(
            UNIT_ROOT_FACTORS, master_seed=5, t_grid=(60, 120), replications=3
        )
        indep = LossTableConfig(
            UNIT_ROOT_FACTORS, master_seed=5, t_grid=(60, 120), replications=3, shared_path=False
        )
        a = run_loss_table(shared)
        b = run_loss_table(indep)
        assert not np.array_equal(a.excess.values, b.excess.values)
        assert a.excess.values.shape == b.excess.values.shape

    def test_excess_grows_with_sample_size(self):
        cfg = LossTableConfig(
            UNIT_ROOT_FACTORS, master_seed=17, t_grid=(100, 250, 500), replications=30
        )
        run = run_loss_table(cfg)
        for di in range(2):
            col = run.excess.values[:, di]
            assert col[0] < col[1] < col[2]

    def test_differencing_helps_when_unit_root_is_real(self):
        # one true unit root: the d=1 estimator drops one noisy dimension,
        # so its excess-loss growth coefficient is 2 against 4
        cfg = LossTableConfig(
            UNIT_ROOT_FACTORS, master_seed=29, t_grid=(200, 400), replications=30
        )
        run = run_loss_table(cfg)
        assert run.excess.values[1, 1] < run.excess.values[1, 0]
        assert run.slope["d=1"] < run.slope["d=0"]

    def test_per_step_normalization_rescales_cells_only(self):
        base_cfg = LossTableConfig(
            UNIT_ROOT_FACTORS, master_seed=7, t_grid=(60, 120), replications=4
        )
        norm_cfg = LossTableConfig(
            UNIT_ROOT_FACTORS,
            master_seed=7,
            t_grid=(60, 120),
            replications=4,
            per_step_normalization=True,
        )
        base = run_loss_table(base_cfg)
        norm = run_loss_table(norm_cfg)
        steps = np.array([[50.0], [110.0]])
        npt.assert_allclose(norm.excess.values, base.excess.values / steps, rtol=1e-15)
        npt.assert_allclose(norm.mse.values, base.mse.values / steps, rtol=1e-15)
        assert norm.slope == base.slope

    def test_single_grid_point_emits_no_slope(self):
        cfg = LossTableConfig(UNIT_ROOT_FACTORS, master_seed=1, t_grid=(80,), replications=2)
        run = run_loss_table(cfg)
        assert run.slope == {}
        assert run.excess.extra_rows == []

    def test_worker_count_does_not_change_output(self):
        kwargs = dict(master_seed=13, t_grid=(60, 120), replications=6)
        serial = run_loss_table(LossTableConfig(UNIT_ROOT_FACTORS, **kwargs))
        pooled = run_loss_table(LossTableConfig(UNIT_ROOT_FACTORS, workers=2, **kwargs))
        assert serial.excess.to_csv() == pooled.excess.to_csv()
        assert serial.mse.to_csv() == pooled.mse.to_csv()


def manual_plugin_sq_errors(values, spec, start, max_horizon):
    """Streaming evaluation reassembled from the public pieces."""
    n = len(values)
    sums = np.zeros(max_horizon)
    counts = np.zeros(max_horizon)
    state = RlsState(spec.order, spec.diff)
    for i, v in enumerate(values):
        state.step(float(v))
        t = i + 1
        if start <= t < n:
            h = min(max_horizon, n - t)
            if spec.diff == 0:
                fc = plugin_forecast(state.beta_hat, values[t - spec.order : t], h)
            else:
                fc = integrated_plugin_forecast(
                    state.beta_hat, values[t - spec.order - 1 : t], h
                )
            err = values[t : t + h] - fc.values
            sums[:h] += err * err
            counts[:h] += 1.0
    return sums, counts


class TestAccumulateHorizonSqErrors:
    @staticmethod
    def sample_values(length, seed=11):
        process = ArProcess(coefficients_from_factors(UNIT_ROOT_FACTORS), sigma=1.0)
        return simulate(process, length, seed).values

    def test_counts_shrink_linearly_near_the_end(self):
        values = self.sample_values(30)
        sums = np.zeros(8)
        counts = np.zeros(8)
        accumulate_horizon_sq_errors(values, PredictorSpec(3, 0), 20, 8, sums, counts)
        npt.assert_array_equal(counts, [10, 9, 8, 7, 6, 5, 4, 3])

    def test_matches_manual_streaming_loop(self):
        values = self.sample_values(60)
        for spec in (PredictorSpec(3, 0), PredictorSpec(3, 1), PredictorSpec(2, 1)):
            sums = np.zeros(6)
            counts = np.zeros(6)
            accumulate_horizon_sq_errors(values, spec, 40, 6, sums, counts)
            want_sums, want_counts = manual_plugin_sq_errors(values, spec, 40, 6)
            npt.assert_allclose(sums, want_sums, rtol=1e-12)
            npt.assert_array_equal(counts, want_counts)

    def test_direct_method_accumulates_same_shape(self):
        values = self.sample_values(60)
        sums = np.zeros(4)
        counts = np.zeros(4)
        accumulate_horizon_sq_errors(values, PredictorSpec(2, 0, "direct"), 45, 4, sums, counts)
        assert np.all(sums > 0)
        npt.assert_array_equal(counts, [15, 14, 13, 12])


class TestRunHorizonTable:
    @staticmethod
    def tiny_config(**kwargs):
        defaults = dict(
            factors=UNIT_ROOT_FACTORS,
            master_seed=23,
            length=80,
            estimation_start=60,
            max_horizon=6,
            replications=3,
            predictors=(PredictorSpec(3, 0), PredictorSpec(3, 1)),
        )
        defaults.update(kwargs)
        return HorizonTableConfig(**defaults)

    def test_benchmark_ratio_is_exactly_100(self):
        table = run_horizon_table(self.tiny_config())
        npt.assert_array_equal(table.values[:, 1], np.full(6, 100.0))

    def test_is_deterministic(self):
        a = run_horizon_table(self.tiny_config())
        b = run_horizon_table(self.tiny_config())
        assert a.to_csv() == b.to_csv()

    def test_worker_count_does_not_change_output(self):
        serial = run_horizon_table(self.tiny_config())
        pooled = run_horizon_table(self.tiny_config(workers=2))
        assert serial.to_csv() == pooled.to_csv()

    def test_column_labels_follow_predictors(self):
        table = run_horizon_table(self.tiny_config())
        assert table.columns == ["rmse p=3 d=0", "ratio p=3 d=0", "ratio p=3 d=1"]
        assert table.row_labels == [1, 2, 3, 4, 5, 6]

    def test_validation(self):
        with pytest.raises(ValueError):
            self.tiny_config(estimation_start=4)
        with pytest.raises(ValueError):
            self.tiny_config(length=50, estimation_start=60)
        with pytest.raises(ValueError):
            self.tiny_config(predictors=())
        with pytest.raises(ValueError):
            self.tiny_config(replications=0)


class TestRollingTable:
    @staticmethod
    def sample_values(length=40, seed=3):
        process = ArProcess(coefficients_from_factors(UNIT_ROOT_FACTORS), sigma=1.0)
        return simulate(process, length, seed).values

    def test_row_labels_stop_at_reachable_horizon(self):
        table = rolling_table(self.sample_values(30), (PredictorSpec(3, 0),), 25, 10)
        assert table.row_labels == [1, 2, 3, 4, 5]

    def test_benchmark_column_is_100(self):
        table = rolling_table(
            self.sample_values(), (PredictorSpec(3, 0), PredictorSpec(1, 1)), 30, 5
        )
        npt.assert_array_equal(table.values[:, 1], np.full(5, 100.0))

    def test_direct_spec_supported(self):
        table = rolling_table(self.sample_values(50), (PredictorSpec(2, 0, "direct"),), 40, 4)
        assert np.all(np.isfinite(table.values))

    def test_start_must_clear_largest_order(self):
        with pytest.raises(ValueError):
            rolling_table(self.sample_values(), (PredictorSpec(4, 0),), 5, 4)

    def test_short_series_raises(self):
        with pytest.raises(TooShortError):
            rolling_table(self.sample_values(30), (PredictorSpec(3, 0),), 35, 4)
