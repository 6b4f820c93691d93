import math

import numpy as np
import pytest

from darkloc import (
    bootstrap_ci,
    bootstrap_diff_ci,
    effective_disorder,
    fit_power_law,
    peak_xi8,
    run_sweep,
)


class TestBootstrap:
    def test_constant_samples(self):
        mean, std = bootstrap_ci([3.5] * 10, seed=1)
        assert mean == 3.5 and std == 0.0

    def test_two_point_analytic(self):
        # resampled means of {0, 1} take values {0, 1/2, 1} with probabilities
        # {1/4, 1/2, 1/4}: the std of the mean converges to sqrt(1/8)
        _, std = bootstrap_ci([0.0, 1.0], n_resamples=200_000, seed=2)
        assert std == pytest.approx(math.sqrt(0.125), rel=0.02)

    def test_gaussian_scaling(self):
        rng = np.random.default_rng(3)
        samples = rng.standard_normal(1000)
        _, std = bootstrap_ci(samples, seed=4)
        assert std == pytest.approx(1.0 / math.sqrt(1000), rel=0.20)

    def test_deterministic(self):
        samples = list(range(20))
        assert bootstrap_ci(samples, seed=5) == bootstrap_ci(samples, seed=5)

    def test_input_validation(self):
        with pytest.raises(ValueError):
            bootstrap_ci([1.0])
        with pytest.raises(ValueError):
            bootstrap_ci([1.0, 2.0], n_resamples=10)

    def test_paired_difference_tighter_than_unpaired(self):
        rng = np.random.default_rng(6)
        base = rng.standard_normal(200)
        a = base + 0.01 * rng.standard_normal(200)
        b = base + 0.01 * rng.standard_normal(200) + 0.05
        diff, std = bootstrap_diff_ci(a, b, seed=7)
        assert diff == pytest.approx(-0.05, abs=0.01)
        _, std_a = bootstrap_ci(a, seed=8)
        assert std < 0.5 * std_a


class TestPowerLawFit:
    def test_exact_power_law(self):
        w = np.array([0.01, 0.02, 0.05, 0.1])
        fit = fit_power_law(w, 7.0 * w**-2.0, seed=1)
        assert fit.beta == pytest.approx(2.0, abs=1e-12)
        assert fit.prefactor == pytest.approx(7.0, rel=1e-10)
        assert fit.residual < 1e-10

    def test_scale_invariance(self):
        w = np.array([0.01, 0.03, 0.1])
        xi = 5.0 * w**-1.7
        a = fit_power_law(w, xi, seed=2)
        b = fit_power_law(w, 1234.5 * xi, seed=2)
        assert b.beta == pytest.approx(a.beta, abs=1e-12)

    def test_bootstrap_std_reported(self):
        rng = np.random.default_rng(9)
        w = np.logspace(-2, -1, 8)
        xi = 3.0 * w**-2.0 * np.exp(0.05 * rng.standard_normal(8))
        fit = fit_power_law(w, xi, seed=3)
        assert 0.0 < fit.bootstrap_std_beta < 0.5

    def test_input_validation(self):
        with pytest.raises(ValueError):
            fit_power_law([0.1, 0.2], [1.0, 2.0])
        with pytest.raises(ValueError):
            fit_power_law([0.1, 0.2, -0.3], [1.0, 2.0, 3.0])
        with pytest.raises(ValueError):
            fit_power_law([0.1, 0.2, 0.3], [1.0, 0.0, 3.0])


class TestEffectiveDisorder:
    def test_reduction_at_one_linewidth(self, params):
        # probing one radiative width away, sigma_eff/J equals W
        w_val = 0.37
        sigma = w_val * params.gamma10
        assert effective_disorder(sigma, params.gamma10, params.g) == pytest.approx(
            w_val * params.J, rel=1e-12)

    def test_zero_disorder(self, params):
        assert effective_disorder(0.0, params.gamma10, params.g) == 0.0

    def test_quadratic_in_detuning(self, params):
        s1 = effective_disorder(1e6, params.gamma10, params.g)
        s2 = effective_disorder(1e6, 2 * params.gamma10, params.g)
        assert s2 == pytest.approx(s1 / 4, rel=1e-12)

    def test_zero_detuning_raises(self, params):
        with pytest.raises(ValueError):
            effective_disorder(1e6, 0.0, params.g)


class TestRunSweep:
    def test_row_identity(self, params):
        table = run_sweep(params, [7.82, 7.83], [0.5, 1.5], 8, 50,
                          master_seed=11)
        for row in table.rows:
            assert row.error is None
            assert math.isfinite(row.xi_N)
            assert row.xi_N * row.mean_log_T == pytest.approx(-8.0, rel=1e-12)
            assert row.n_realizations == 50

    def test_worker_count_invariance(self, params):
        kwargs = dict(n_qubits=8, n_realizations=30, master_seed=12)
        serial = run_sweep(params, [7.82, 7.84], [0.3, 1.0], **kwargs, workers=1)
        pooled = run_sweep(params, [7.82, 7.84], [0.3, 1.0], **kwargs, workers=3)
        for a, b in zip(serial.rows, pooled.rows):
            assert a == b

    def test_failed_cell_is_flagged(self, params):
        # 200 GHz is far outside the photon band: evanescent in the leads
        table = run_sweep(params, [7.82, 200.0], [0.5], 8, 20, master_seed=13)
        errors = {r.f_GHz: r.error for r in table.rows}
        assert errors[7.82] is None
        assert "evanescent" in errors[200.0]
        assert len(table.failed_cells) == 1
        assert math.isnan([r for r in table.rows if r.f_GHz == 200.0][0].xi_N)

    def test_dissipative_engine(self, params):
        table = run_sweep(params, [7.8295], [0.5], 8, 40, engine="dissipative",
                          gamma_nr=2 * math.pi * 400e3, master_seed=14)
        row = table.rows[0]
        assert row.error is None and math.isfinite(row.xi_N) and row.xi_N > 0

    def test_lyapunov_engine_row_identity(self, params):
        table = run_sweep(params, [7.82], [1.0], 20_000, 3, engine="lyapunov",
                          master_seed=15)
        row = table.rows[0]
        assert row.error is None
        assert row.xi_N * row.mean_log_T == pytest.approx(-20_000.0, rel=1e-12)

    def test_lyapunov_divergence_sentinel(self):
        from darkloc import derive_params
        p = derive_params(g=0.0)
        table = run_sweep(p, [7.82], [1.0], 10_000, 2, engine="lyapunov",
                          master_seed=16)
        assert table.rows[0].xi_N == math.inf

    def test_empty_grid_rejected(self, params):
        with pytest.raises(ValueError):
            run_sweep(params, [], [0.5], 8, 10)

    def test_unknown_engine_rejected(self, params):
        with pytest.raises(ValueError):
            run_sweep(params, [7.82], [0.5], 8, 10, engine="bogus")


class TestPeakTracking:
    def test_peak_near_dark_mode_at_weak_disorder(self, params):
        f_peak, xi8, log_t = peak_xi8(params, 0.16, 300, master_seed=17)
        assert 7.828 <= f_peak <= 7.831
        assert xi8 > 50
        assert log_t.shape == (300,)

    def test_peak_value_decreases_with_disorder(self, params):
        _, xi_weak, _ = peak_xi8(params, 0.16, 300, master_seed=18)
        _, xi_strong, _ = peak_xi8(params, 2.04, 300, master_seed=18)
        assert xi_strong < 0.1 * xi_weak
