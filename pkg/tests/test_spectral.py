import numpy as np
import pytest

from wavemodels.checks import (
    dealias_oracle_error,
    hilbert_involution_error,
    lambda_factorization_error,
    linearity_error,
    random_band_limited,
    roundtrip_error,
    tricomi_error,
)
from wavemodels.errors import ConfigError, NumericError, UsageError
from wavemodels.spectral import (
    MultiplierSymbol,
    SpectralField,
    apply_symbol,
    commutator,
    dealias,
    dealiased_product,
    deriv,
    hilbert,
    lam,
    make_grid,
)


class TestGrid:
    def test_eight_node_grid_matches_definition(self):
        grid = make_grid(8)
        expected = -np.pi + np.pi / 4 * np.arange(8)
        assert np.allclose(grid.nodes, expected, atol=1e-15)
        assert grid.nodes[0] == pytest.approx(-np.pi)

    def test_paper_resolution(self):
        assert make_grid(2 ** 11).n_nodes == 2048

    def test_nodes_equispaced_increasing(self):
        grid = make_grid(32)
        gaps = np.diff(grid.nodes)
        assert np.all(gaps > 0)
        assert np.allclose(gaps, gaps[0])

    @pytest.mark.parametrize("bad", [7, 6, 4, 0, -8, 24])
    def test_rejects_non_power_of_two(self, bad):
        with pytest.raises(ConfigError):
            make_grid(bad)

    def test_rejects_bad_length(self):
        with pytest.raises(ConfigError):
            make_grid(16, length=-1.0)


class TestSymbols:
    def test_hilbert_of_sin_is_minus_cos(self, grid64):
        f = SpectralField.from_function(grid64, np.sin)
        assert np.allclose(hilbert(f).values, -np.cos(grid64.nodes), atol=1e-13)

    def test_hilbert_of_cos_is_sin(self, grid64):
        f = SpectralField.from_function(grid64, np.cos)
        assert np.allclose(hilbert(f).values, np.sin(grid64.nodes), atol=1e-13)

    def test_hilbert_annihilates_constants(self, grid64):
        f = SpectralField(grid64, np.ones(64))
        assert np.max(np.abs(hilbert(f).values)) < 1e-14

    def test_lambda_cubed_on_single_mode(self, grid64):
        f = SpectralField.from_function(grid64, lambda x: np.sin(2 * x))
        assert np.allclose(lam(f, 3).values, 8 * np.sin(2 * grid64.nodes), atol=1e-11)

    def test_lambda_inverse_annihilates_mean(self, grid64):
        f = SpectralField(grid64, np.cos(grid64.nodes) + 5.0)
        out = lam(f, -1.0)
        assert out.mean() == pytest.approx(0.0, abs=1e-14)
        assert np.allclose(out.values, np.cos(grid64.nodes), atol=1e-13)

    def test_resolvent_m_closed_form(self, grid64):
        f = SpectralField.from_function(grid64, np.cos)
        out = apply_symbol(f, MultiplierSymbol.resolvent_M(2.0))
        assert np.allclose(out.values, np.cos(grid64.nodes) / 4.0, atol=1e-14)

    def test_resolvent_n_symbol_value(self):
        sym = MultiplierSymbol.resolvent_N(0.8, 0.4)
        c = 0.6
        for k in (1, -3, 5):
            expected = (1 - c * 1j * k) / (1 + (c * k) ** 2)
            assert sym(k) == pytest.approx(expected)

    def test_resolvent_p_symbol_value(self):
        sym = MultiplierSymbol.resolvent_P()
        assert sym(3) == pytest.approx(1.0 / 10.0)
        assert sym(0) == pytest.approx(1.0)

    def test_derivative_symbol(self, grid64):
        f = SpectralField.from_function(grid64, lambda x: np.sin(3 * x))
        assert np.allclose(deriv(f).values, 3 * np.cos(3 * grid64.nodes), atol=1e-12)

    def test_apply_symbol_rejects_nonfinite(self, grid64):
        f = SpectralField(grid64, np.ones(64))
        f.values[3] = np.nan
        with pytest.raises(NumericError):
            apply_symbol(f, MultiplierSymbol.hilbert())

    def test_spectrum_coefficient_convention(self, grid64):
        # cos(kx) has coefficient 1/2 at +-k, sin(kx) has -i/2 at +k
        f = SpectralField.from_function(grid64, lambda x: np.cos(3 * x))
        assert f.coefficient(3) == pytest.approx(0.5)
        g = SpectralField.from_function(grid64, np.sin)
        assert g.coefficient(1) == pytest.approx(-0.5j)
        assert g.coefficient(-1) == pytest.approx(0.5j)

    def test_spectrum_hermitian(self, grid64, rng):
        f = random_band_limited(grid64, 20, rng, zero_mean=False)
        spec = f.spectrum
        mirrored = np.conj(np.roll(spec[::-1], 1))
        assert np.allclose(spec, mirrored, atol=1e-14)

    def test_from_spectrum_rejects_non_hermitian(self, grid64):
        spec = np.zeros(64, dtype=complex)
        spec[1] = 1.0 + 1.0j  # no conjugate partner
        with pytest.raises(UsageError):
            SpectralField.from_spectrum(grid64, spec)


class TestProductsAndCommutators:
    def test_sin_times_cos(self, grid64):
        f = SpectralField.from_function(grid64, np.sin)
        g = SpectralField.from_function(grid64, np.cos)
        out = dealiased_product(f, g)
        assert np.allclose(out.values, 0.5 * np.sin(2 * grid64.nodes), atol=1e-14)

    def test_one_times_g_is_filtered_g(self, grid64, rng):
        one = SpectralField(grid64, np.ones(64))
        g = random_band_limited(grid64, 31, rng)
        out = dealiased_product(one, g)
        assert np.allclose(out.values, dealias(g).values, atol=1e-14)

    def test_edge_mode_against_fine_grid(self):
        # cos(21x)^2 on n=64 aliases at 42 -> the dealiased result is the
        # constant 1/2, matching the fine-grid product truncated to the band
        grid = make_grid(64)
        k = 64 // 3
        f = SpectralField.from_function(grid, lambda x: np.cos(k * x))
        out = dealiased_product(f, f)
        assert np.allclose(out.values, 0.5, atol=1e-13)

    def test_fine_grid_oracle_random(self):
        assert dealias_oracle_error(n=64, trials=10) < 1e-12

    def test_mismatched_grids_rejected(self):
        f = SpectralField(make_grid(64), np.zeros(64))
        g = SpectralField(make_grid(128), np.zeros(128))
        with pytest.raises(UsageError):
            dealiased_product(f, g)

    def test_commutator_hilbert_cos_cos_vanishes(self, grid64):
        f = SpectralField.from_function(grid64, np.cos)
        out = commutator("hilbert", f, f)
        assert np.max(np.abs(out.values)) < 1e-14

    def test_constants_commute(self, grid64, rng):
        c = SpectralField(grid64, np.full(64, 2.5))
        g = random_band_limited(grid64, 15, rng)
        for kind in ("hilbert", "second_derivative"):
            out = commutator(kind, c, g)
            assert np.max(np.abs(out.values)) < 1e-11

    def test_unknown_commutator_kind(self, grid64):
        f = SpectralField(grid64, np.zeros(64))
        with pytest.raises(UsageError):
            commutator("laplacian", f, f)


class TestOperatorInvariants:
    def test_roundtrip(self):
        assert roundtrip_error() < 1e-12

    def test_hilbert_involution(self):
        assert hilbert_involution_error() < 1e-12

    def test_tricomi_identity(self):
        assert tricomi_error(n=256, trials=30) < 1e-10

    def test_lambda_is_hilbert_derivative(self):
        assert lambda_factorization_error() < 1e-12

    def test_linearity(self):
        assert linearity_error() < 1e-12
