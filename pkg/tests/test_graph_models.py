import numpy as np
import pytest

from wavemodels.checks import (
    mean_conservation_error,
    quadratic_scaling_slope,
    specialization_error,
    uni_linear_symbol_error,
)
from wavemodels.errors import ParameterError, PreconditionError, UsageError
from wavemodels.graph_models import (
    GraphState,
    WaveProfile,
    linear_mode_solution,
    mode_coefficients,
    rhs_internal,
    rhs_inviscid,
    rhs_odd,
    rhs_viscous,
    unidirectional_symbol,
)
from wavemodels.params import ModelParams
from wavemodels.spectral import SpectralField, make_grid


def single_mode_state(grid, k=1, amp_h=1.0, amp_v=0.0, trig=np.cos):
    h = SpectralField(grid, amp_h * trig(k * grid.nodes))
    v = SpectralField(grid, amp_v * trig(k * grid.nodes))
    return GraphState(h, v)


class TestViscous:
    def test_linear_single_mode(self, grid64):
        # h = delta cos x, v = 0: v_t = -(|k| + beta|k|^3 + a1 a2 k^4) h
        delta = 0.3
        st = single_mode_state(grid64, amp_h=delta)
        p = ModelParams(epsilon=0.0, beta=1.0, alpha1=1.0, alpha2=1.0)
        d = rhs_viscous(st, p, "bidirectional")
        assert np.allclose(d.h.values, 0.0, atol=1e-14)
        # k^4 spectral differentiation amplifies FFT rounding to ~1e-11
        assert np.allclose(d.v.values, -3.0 * delta * np.cos(grid64.nodes), atol=1e-10)

    def test_equilibrium(self, grid64):
        st = GraphState(SpectralField.zeros(grid64), SpectralField.zeros(grid64))
        d = rhs_viscous(st, ModelParams(epsilon=0.5, alpha1=1.0, alpha2=0.5), "bidirectional")
        assert np.max(np.abs(d.h.values)) == 0.0
        assert np.max(np.abs(d.v.values)) == 0.0

    def test_unidirectional_linear_symbol(self):
        # closed form: (1/2e) N(k) (ik + (a1+a2)(ik)^2 - i sgn k
        #                           - beta (-i sgn k)(ik)^2 + a1 a2 (ik)^3)
        p = ModelParams(epsilon=0.7, beta=0.4, alpha1=0.8, alpha2=0.3)
        c = 0.5 * (p.alpha1 + p.alpha2)
        for k in (1, 2, -3):
            ik = 1j * k
            nsym = (1 - c * ik) / (1 + (c * k) ** 2)
            bracket = (ik + (p.alpha1 + p.alpha2) * ik ** 2 + (-1j * np.sign(k))
                       - p.beta * (-1j * np.sign(k)) * ik ** 2
                       + p.alpha1 * p.alpha2 * ik ** 3)
            expected = nsym * bracket / (2 * p.epsilon)
            assert unidirectional_symbol("viscous-uni", k, p) == pytest.approx(expected)

    def test_rhs_matches_symbol_on_small_profiles(self):
        assert uni_linear_symbol_error() < 1e-5

    def test_epsilon_zero_rejected_for_unidirectional(self, grid64):
        f = WaveProfile(SpectralField.from_function(grid64, np.sin))
        with pytest.raises(ParameterError):
            rhs_viscous(f, ModelParams(epsilon=0.0), "unidirectional")

    def test_nonzero_mean_profile_rejected(self, grid64):
        with pytest.raises(PreconditionError):
            WaveProfile(SpectralField(grid64, np.cos(grid64.nodes) + 1.0))

    def test_unknown_form_rejected(self, grid64):
        st = GraphState(SpectralField.zeros(grid64), SpectralField.zeros(grid64))
        with pytest.raises(UsageError):
            rhs_viscous(st, ModelParams(), "sideways")


class TestOdd:
    def test_dispersive_balance(self, grid64):
        # h = cos x, v = sin x, alpha = 1: -Lambda h + Lambda d/dx v = 0
        st = GraphState(SpectralField.from_function(grid64, np.cos),
                        SpectralField.from_function(grid64, np.sin))
        d = rhs_odd(st, ModelParams(epsilon=0.0, beta=0.0, alpha=1.0), "bidirectional")
        assert np.max(np.abs(d.v.values)) < 1e-12

    def test_equilibrium(self, grid64):
        st = GraphState(SpectralField.zeros(grid64), SpectralField.zeros(grid64))
        d = rhs_odd(st, ModelParams(epsilon=0.3, alpha=2.0), "bidirectional")
        assert np.max(np.abs(d.v.values)) == 0.0

    def test_unidirectional_alpha_equals_beta(self, grid64):
        # alpha = beta kills both (alpha-beta) terms; for f = cos x the
        # commutator vanishes and -2 f f' = sin 2x, so f_t = sin(2x)/(2+2a)
        alpha = 0.7
        p = ModelParams(epsilon=1.0, beta=alpha, alpha=alpha)
        f = WaveProfile(SpectralField.from_function(grid64, np.cos))
        d = rhs_odd(f, p, "unidirectional")
        expected = np.sin(2 * grid64.nodes) / (2.0 + 2.0 * alpha)
        assert np.allclose(d.f.values, expected, atol=1e-13)


class TestInviscid:
    def test_unidirectional_single_mode(self, grid64):
        f = WaveProfile(SpectralField.from_function(grid64, np.cos))
        d = rhs_inviscid(f, ModelParams(epsilon=1.0, beta=0.0), "unidirectional")
        assert np.allclose(d.f.values, 0.5 * np.sin(2 * grid64.nodes), atol=1e-13)

    def test_bidirectional_cos_at_rest(self, grid64):
        st = single_mode_state(grid64)
        d = rhs_inviscid(st, ModelParams(epsilon=0.8, beta=0.0), "bidirectional")
        assert np.allclose(d.v.values, -np.cos(grid64.nodes), atol=1e-13)

    def test_epsilon_zero_is_linear_dispersion(self, grid64, rng):
        from wavemodels.checks import random_band_limited
        from wavemodels.spectral import lam
        h = random_band_limited(grid64, 10, rng)
        v = random_band_limited(grid64, 10, rng)
        d = rhs_inviscid(GraphState(h, v), ModelParams(epsilon=0.0, beta=0.0), "bidirectional")
        assert np.allclose(d.v.values, -lam(h).values, atol=1e-13)


class TestInternal:
    def test_unidirectional_example(self, grid64):
        # f = cos x, A = 1, beta = 0, eps = 1:
        # f_t = (1/2)(-sin x - sin x + cos 2x) = -sin x + cos(2x)/2
        f = WaveProfile(SpectralField.from_function(grid64, np.cos))
        d = rhs_internal(f, ModelParams(epsilon=1.0, beta=0.0, atwood=1.0), "unidirectional")
        expected = -np.sin(grid64.nodes) + 0.5 * np.cos(2 * grid64.nodes)
        assert np.allclose(d.f.values, expected, atol=1e-13)

    def test_bidirectional_at_rest(self, grid64):
        st = single_mode_state(grid64)
        d = rhs_internal(st, ModelParams(beta=0.0, atwood=-1.0), "bidirectional")
        assert np.allclose(d.v.values, -np.cos(grid64.nodes), atol=1e-13)

    def test_first_order_system_gravity_only(self, grid64):
        h = SpectralField.from_function(grid64, np.sin)
        w = SpectralField.zeros(grid64)
        p = ModelParams(atwood=1.0, gravity=1.0)
        h_t, w_t = rhs_internal((h, w), p, "first_order_system")
        assert np.max(np.abs(h_t.values)) == 0.0
        assert np.allclose(w_t.values, 2.0 * np.cos(grid64.nodes), atol=1e-13)

    def test_atwood_out_of_range(self):
        with pytest.raises(ParameterError):
            ModelParams(atwood=1.5)


class TestFamilyInvariants:
    def test_specializations_agree(self):
        assert specialization_error() < 1e-12

    def test_mean_is_conserved(self):
        assert mean_conservation_error() < 1e-12

    def test_quadratic_truncation_scaling(self):
        assert 1.9 <= quadratic_scaling_slope() <= 2.1


class TestLinearModeSolution:
    def test_inviscid_is_cosine(self):
        p = ModelParams(epsilon=0.0, beta=0.0)
        for t in (0.0, 0.5, 2.0):
            h, v = linear_mode_solution("inviscid", 1, p, t, h0=1.0, v0=0.0)
            assert h == pytest.approx(np.cos(t), abs=1e-12)
            assert v == pytest.approx(-np.sin(t), abs=1e-12)

    def test_viscous_damped_oscillation(self):
        # k=1, beta=1, a1=a2=1: lambda^2 + 2 lambda + 3 = 0
        p = ModelParams(epsilon=0.0, beta=1.0, alpha1=1.0, alpha2=1.0)
        t = 0.8
        h, _ = linear_mode_solution("viscous", 1, p, t, h0=1.0, v0=0.0)
        s = np.sqrt(2.0)
        expected = np.exp(-t) * (np.cos(s * t) + np.sin(s * t) / s)
        assert h == pytest.approx(expected, abs=1e-12)

    def test_rayleigh_taylor_growth(self):
        p = ModelParams(epsilon=0.0, beta=0.0, atwood=1.0)
        D, Om = mode_coefficients("internal", 2, p)
        assert Om == pytest.approx(-2.0)
        rate = np.sqrt(2.0)
        h, v = linear_mode_solution("internal", 2, p, 1.0, h0=1.0, v0=rate)
        assert h == pytest.approx(np.exp(rate), rel=1e-12)

    def test_repeated_root_uses_degenerate_basis(self):
        # a1=3, a2=1, beta=0, k=1: lambda^2 + 4 lambda + 4 = (lambda+2)^2
        p = ModelParams(epsilon=0.0, beta=0.0, alpha1=3.0, alpha2=1.0)
        t = 0.6
        h, v = linear_mode_solution("viscous", 1, p, t, h0=1.0, v0=0.0)
        assert h == pytest.approx((1 + 2 * t) * np.exp(-2 * t), abs=1e-12)

    def test_zero_mode_rejected(self):
        with pytest.raises(UsageError):
            linear_mode_solution("inviscid", 0, ModelParams(), 1.0, 1.0, 0.0)

    def test_odd_damping_is_complex(self):
        p = ModelParams(epsilon=0.0, beta=0.0, alpha=1.5)
        D, _ = mode_coefficients("odd", 2, p)
        assert D == pytest.approx(-1j * 1.5 * 2 * 2)
