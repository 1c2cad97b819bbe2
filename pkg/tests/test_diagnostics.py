import numpy as np
import pytest

from wavemodels.checks import (
    circle_state,
    ellipse_state,
    intersection_agreement,
    sobolev_l2_error,
    wiener_monotonicity_gap,
)
from wavemodels.curve_models import CurveState
from wavemodels.diagnostics import (
    NormSeries,
    StripMonitor,
    arc_chord,
    decay_fit,
    self_intersects,
    self_intersects_bruteforce,
    sobolev_norm,
    strip_monitor,
    wiener_norm,
)
from wavemodels.errors import FitError, NumericError
from wavemodels.spectral import SpectralField, make_grid
from wavemodels.timestep import Trajectory


def _traj(times, rows):
    times = np.asarray(times, dtype=float)
    return Trajectory(times=times, states=np.asarray(rows), stop_reason="reached_tmax",
                      t_final=float(times[-1]))


class TestNorms:
    def test_sobolev_of_sine(self, grid128):
        f = SpectralField.from_function(grid128, np.sin)
        assert sobolev_norm(f, 0.0) == pytest.approx(np.sqrt(np.pi), abs=1e-12)
        assert sobolev_norm(f, 1.0) == pytest.approx(np.sqrt(2 * np.pi), abs=1e-12)

    def test_sobolev_of_zero(self, grid128):
        assert sobolev_norm(SpectralField.zeros(grid128), 2.0) == 0.0

    def test_sobolev_matches_l2_quadrature(self):
        assert sobolev_l2_error() < 1e-10

    def test_wiener_of_sine(self, grid128):
        # exact coefficients: the norm is e^nu on the nose
        spec = np.zeros(128, dtype=complex)
        spec[1], spec[-1] = -0.5j, 0.5j
        f = SpectralField.from_spectrum(grid128, spec)
        for nu in (0.0, 0.5, 1.0):
            assert wiener_norm(f, nu) == pytest.approx(np.exp(nu), abs=1e-12)

    def test_wiener_noise_floor_recovers_sampled_fields(self, grid128):
        # fields built from samples carry an FFT rounding tail that e^(nu|k|)
        # amplifies; the floor removes it
        f = SpectralField.from_function(grid128, np.sin)
        assert abs(wiener_norm(f, 1.0, floor=1e-13) - np.e) < 1e-12
        assert abs(wiener_norm(f, 1.0) - np.e) > 1.0  # raw norm is noise-dominated

    def test_wiener_zero_field(self, grid128):
        assert wiener_norm(SpectralField.zeros(grid128), 0.7) == 0.0

    def test_wiener_monotone_in_nu(self):
        assert wiener_monotonicity_gap() >= 0.0

    def test_wiener_overflow_guard(self, grid128):
        f = SpectralField.from_function(grid128, np.sin)
        with pytest.raises(NumericError):
            wiener_norm(f, 20.0)  # nu * k_max = 1280 >> exponent budget


class TestStripMonitor:
    def test_zero_data_degenerate_horizon(self, grid128):
        f0 = SpectralField.zeros(grid128)
        monitor = StripMonitor.for_initial_data(f0)
        assert monitor.horizon == np.inf
        traj = _traj([0.0, 1.0, 2.0], [f0.values, f0.values, f0.values])
        series = strip_monitor(traj, f0)
        assert np.all(series.values == 0.0)
        assert len(series.times) == 3

    def test_horizon_for_small_sine(self, grid128):
        delta = 0.05
        f0 = SpectralField(grid128, delta * np.sin(grid128.nodes))
        monitor = StripMonitor.for_initial_data(f0)
        assert monitor.shrink_rate == pytest.approx(4 * delta * np.e, abs=1e-12)
        assert monitor.horizon == pytest.approx(1.0 / (4 * delta * np.e), abs=1e-10)

    def test_series_truncates_at_horizon(self, grid128):
        f0 = SpectralField(grid128, 0.05 * np.sin(grid128.nodes))
        horizon = StripMonitor.for_initial_data(f0).horizon
        times = [0.0, 0.5 * horizon, 0.99 * horizon, 1.01 * horizon, 2 * horizon]
        traj = _traj(times, [f0.values] * 5)
        series = strip_monitor(traj, f0)
        assert len(series.times) == 3


class TestArcChord:
    def test_unit_circle_value(self, grid128):
        # ratio theta / (2 sin(theta/2)) peaks at opposite nodes: pi/2
        assert arc_chord(circle_state(grid128)) == pytest.approx(np.pi / 2, abs=1e-12)

    def test_pinching_family_grows(self, grid128):
        values = []
        for p in (0.5, 0.3, 0.15, 0.08):
            width = p + (1 - p) * np.cos(grid128.nodes) ** 2
            c = CurveState(SpectralField(grid128, np.cos(grid128.nodes)),
                           SpectralField(grid128, width * np.sin(grid128.nodes)),
                           SpectralField.zeros(grid128))
            values.append(arc_chord(c))
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_coincident_nodes_give_inf(self, grid128):
        x = np.cos(grid128.nodes)
        y = np.sin(grid128.nodes)
        x[3], y[3] = x[40], y[40]
        c = CurveState(SpectralField(grid128, x), SpectralField(grid128, y),
                       SpectralField.zeros(grid128))
        assert arc_chord(c) == np.inf


class TestSelfIntersection:
    def test_circle_and_ellipse_are_simple(self, grid128):
        assert self_intersects(circle_state(grid128)) is False
        assert self_intersects(ellipse_state(grid128, a=2.0, b=1.0)) is False

    def test_figure_eight_crosses(self, grid128):
        # phase offsets move the crossing into segment interiors
        x = np.sin(2 * grid128.nodes + 0.5)
        y = np.cos(grid128.nodes + 0.25)
        c = CurveState(SpectralField(grid128, x), SpectralField(grid128, y),
                       SpectralField.zeros(grid128))
        assert self_intersects(c) is True
        assert self_intersects_bruteforce(c) is True

    def test_sweep_agrees_with_bruteforce(self):
        agree, trials = intersection_agreement(trials=100, n=128)
        assert agree == trials


class TestDecayFit:
    def test_exact_exponential(self):
        t = np.linspace(0, 3, 40)
        series = NormSeries(t, np.exp(-2.0 * t), label="h1")
        rate, r2 = decay_fit(series, (0.0, 3.0))
        assert rate == pytest.approx(-2.0, abs=1e-12)
        assert r2 == pytest.approx(1.0, abs=1e-12)

    def test_constant_series(self):
        t = np.linspace(0, 1, 10)
        rate, r2 = decay_fit(NormSeries(t, np.full(10, 3.3), label="h1"), (0.0, 1.0))
        assert rate == pytest.approx(0.0, abs=1e-14)
        assert r2 == 1.0

    def test_window_restricts_samples(self):
        t = np.linspace(0, 10, 101)
        vals = np.exp(-t)
        vals[:10] = 1.0  # pollute outside the window
        rate, _ = decay_fit(NormSeries(t, vals, label="h1"), (2.0, 9.0))
        assert rate == pytest.approx(-1.0, abs=1e-12)

    def test_nonpositive_values_rejected(self):
        t = np.linspace(0, 1, 5)
        with pytest.raises(FitError):
            decay_fit(NormSeries(t, np.array([1.0, 0.5, 0.0, 0.2, 0.1]), label="h1"),
                      (0.0, 1.0))

    def test_needs_two_samples(self):
        with pytest.raises(FitError):
            decay_fit(NormSeries(np.array([0.0]), np.array([1.0]), label="h1"), (0.0, 1.0))
