import numpy as np
import pytest

from wavemodels.checks import adaptive_linear_error, dp45_order_slope, rk4_order_slope
from wavemodels.errors import ConfigError, NumericError
from wavemodels.timestep import IntegratorConfig, integrate, step_dp45, step_rk4


class TestConfig:
    def test_defaults_valid(self):
        cfg = IntegratorConfig()
        assert cfg.rel_tol == 1e-8 and cfg.abs_tol == 1e-8
        assert cfg.dt_min <= cfg.dt_initial <= cfg.dt_max
        assert 0 < cfg.safety < 1

    @pytest.mark.parametrize("kwargs", [
        {"rel_tol": -1.0}, {"safety": 1.5}, {"dt_initial": 1e-15},
        {"dt_max": 1e-6, "dt_initial": 1e-3}, {"max_steps": 0},
    ])
    def test_invalid_configs_rejected(self, kwargs):
        with pytest.raises(ConfigError):
            IntegratorConfig(**kwargs)


class TestStepRK4:
    def test_zero_rhs_is_identity(self):
        y = np.array([1.0, -2.0])
        assert np.all(step_rk4(lambda t, y: 0.0 * y, y, 0.0, 0.1) == y)

    def test_constant_rhs_is_exact(self):
        y = step_rk4(lambda t, y: np.ones_like(y), np.array([1.0]), 0.0, 0.1)
        assert y[0] == pytest.approx(1.1, abs=1e-16)

    def test_order_four(self):
        assert 3.8 <= rk4_order_slope() <= 4.2

    def test_rejects_nonpositive_dt(self):
        with pytest.raises(ConfigError):
            step_rk4(lambda t, y: y, np.array([1.0]), 0.0, 0.0)

    def test_nan_raises(self):
        with pytest.raises(NumericError):
            step_rk4(lambda t, y: y * np.nan, np.array([1.0]), 0.0, 0.1)


class TestAdaptiveIntegrate:
    def test_linear_decay(self):
        assert adaptive_linear_error() < 1e-8

    def test_harmonic_oscillator_period(self):
        rhs = lambda t, y: np.array([-y[1], y[0]])
        traj = integrate(rhs, np.array([1.0, 0.0]), 0.0, 2 * np.pi, IntegratorConfig())
        assert np.allclose(traj.states[-1], [1.0, 0.0], atol=1e-6)
        assert traj.stop_reason == "reached_tmax"

    def test_embedded_pair_order(self):
        assert dp45_order_slope() >= 4.8

    def test_sampling_by_linear_interpolation(self):
        # y' = 1: interpolation is exact at every multiple of sample_every
        traj = integrate(lambda t, y: np.ones_like(y), np.array([0.0]), 0.0, 1.0,
                         IntegratorConfig(), sample_every=0.25)
        assert np.allclose(traj.times, [0.0, 0.25, 0.5, 0.75, 1.0], atol=1e-12)
        assert np.allclose(traj.states[:, 0], traj.times, atol=1e-12)

    def test_times_strictly_increasing(self):
        traj = integrate(lambda t, y: -y, np.array([1.0]), 0.0, 1.0,
                         IntegratorConfig(), sample_every=0.1)
        assert np.all(np.diff(traj.times) > 0)

    def test_event_stops_run(self):
        events = [("threshold", lambda t, y: y[0] > 0.5)]
        traj = integrate(lambda t, y: np.ones_like(y), np.array([0.0]), 0.0, 2.0,
                         IntegratorConfig(), events=events, sample_every=0.05)
        assert traj.stop_reason == "event(threshold)"
        assert traj.event_name == "threshold"
        # the reported stop time is the first accepted-step time past the threshold
        assert traj.t_final >= 0.5
        assert traj.states[-1][0] == pytest.approx(traj.t_final, abs=1e-10)

    def test_dt_underflow_returns_partial_trajectory(self):
        def bad_rhs(t, y):
            return y * np.nan
        traj = integrate(bad_rhs, np.array([1.0]), 0.0, 1.0,
                         IntegratorConfig(dt_min=1e-6, dt_initial=1e-3))
        assert traj.stop_reason == "dt_underflow"
        assert traj.times[0] == 0.0 and traj.states[0][0] == 1.0

    def test_nan_initial_state_raises(self):
        with pytest.raises(NumericError):
            integrate(lambda t, y: -y, np.array([np.nan]), 0.0, 1.0, IntegratorConfig())

    def test_max_steps_reported(self):
        cfg = IntegratorConfig(max_steps=3, dt_max=1e-3)
        traj = integrate(lambda t, y: -y, np.array([1.0]), 0.0, 10.0, cfg)
        assert traj.stop_reason == "max_steps"
        assert traj.n_accepted <= 3

    def test_bit_reproducible(self):
        rhs = lambda t, y: np.array([np.sin(t) - y[0] ** 2])
        runs = [integrate(rhs, np.array([0.3]), 0.0, 2.0, IntegratorConfig(), sample_every=0.1)
                for _ in range(2)]
        assert np.array_equal(runs[0].times, runs[1].times)
        assert np.array_equal(runs[0].states, runs[1].states)
        assert runs[0].n_rhs == runs[1].n_rhs

    def test_bad_time_interval(self):
        with pytest.raises(ConfigError):
            integrate(lambda t, y: -y, np.array([1.0]), 1.0, 0.5, IntegratorConfig())

    def test_single_mode_wave_returns_after_period(self):
        # inviscid single mode k=1 oscillates at frequency sqrt(|k|) = 1
        from wavemodels.checks import bi_rhs_callable
        from wavemodels.params import ModelParams
        from wavemodels.spectral import make_grid
        grid = make_grid(32)
        p = ModelParams(epsilon=0.0, beta=0.0)
        rhs = bi_rhs_callable("inviscid-bi", grid, p)
        y0 = np.concatenate([np.cos(grid.nodes), np.zeros(32)])
        traj = integrate(rhs, y0, 0.0, 2 * np.pi, IntegratorConfig())
        assert np.allclose(traj.states[-1], y0, atol=1e-6)


class TestDP45Step:
    def test_matches_integrate_backbone(self):
        y5, err = step_dp45(lambda t, y: -y, np.array([1.0]), 0.0, 0.1)
        assert y5[0] == pytest.approx(np.exp(-0.1), abs=1e-9)
        assert abs(err[0]) < 1e-8
