"""Periodic grid, Fourier fields and multiplier operators.

This module is the operator calculus every model consumes: Hilbert transform,
fractional Laplacian powers, spectral derivatives, the resolvent smoothers
used by the unidirectional models, dealiased products (2/3 rule) and
commutators.

Conventions
-----------
Fourier coefficients are ``fhat(k) = (1/n) * sum_j f(x_j) exp(-i k x_j)`` so a
field ``cos(k x)`` has coefficients of value 1/2 at ``+-k``.  Wavenumbers are
stored in numpy's FFT ordering.  All operations are pure: fields are never
mutated, results are new ``SpectralField`` instances, and concurrent read-only
use is safe.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConfigError, NumericError, UsageError

TWO_PI = 2.0 * np.pi


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class PeriodicGrid:
    """Uniform collocation grid on ``[-length/2, length/2)``.

    ``n_nodes`` must be a power of two (>= 8) so the FFT butterflies and the
    alternating-point quadrature in the curve module both apply.
    """

    n_nodes: int
    length: float = TWO_PI
    nodes: np.ndarray = field(init=False, repr=False, compare=False)
    wavenumbers: np.ndarray = field(init=False, repr=False, compare=False)
    dealias_keep: np.ndarray = field(init=False, repr=False, compare=False)
    phase: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.n_nodes, (int, np.integer)) or not _is_power_of_two(int(self.n_nodes)) or self.n_nodes < 8:
            raise ConfigError(f"n_nodes must be a power of two >= 8, got {self.n_nodes!r}")
        if not np.isfinite(self.length) or self.length <= 0:
            raise ConfigError(f"grid length must be positive, got {self.length!r}")
        n = int(self.n_nodes)
        h = self.length / n
        object.__setattr__(self, "nodes", -0.5 * self.length + h * np.arange(n))
        # angular wavenumbers; integers when length == 2*pi
        object.__setattr__(self, "wavenumbers", TWO_PI * np.fft.fftfreq(n, d=h))
        # 2/3-rule mask: keep |k_index| <= n // 3 (n is a power of two, never
        # divisible by 3, so quadratic aliases land strictly outside the kept band)
        k_index = np.fft.fftfreq(n, d=1.0 / n)
        object.__setattr__(self, "dealias_keep", np.abs(k_index) <= n // 3)
        # numpy's FFT references samples to x=0; the first node sits at -L/2,
        # so coefficients in the convention fhat(k) = (1/n) sum f(x_j) e^(-ikx_j)
        # carry the alternating phase e^(ik L/2) = (-1)^k (real, self-inverse)
        object.__setattr__(self, "phase", np.where(k_index.astype(int) % 2 == 0, 1.0, -1.0))

    @property
    def spacing(self) -> float:
        return self.length / self.n_nodes

    def mode_index(self) -> np.ndarray:
        """Integer mode numbers in FFT ordering (0, 1, ..., -n/2, ..., -1)."""
        return np.rint(self.wavenumbers * self.length / TWO_PI).astype(int)


def make_grid(n_nodes: int, length: float = TWO_PI) -> PeriodicGrid:
    """Build a periodic collocation grid; see ``PeriodicGrid`` for constraints."""
    return PeriodicGrid(int(n_nodes), float(length))


def _hermitianize(spec: np.ndarray) -> np.ndarray:
    """Force the Nyquist bin real so the coefficients describe a real field."""
    out = np.array(spec, dtype=complex)
    n = out.shape[0]
    out[n // 2] = out[n // 2].real
    return out


class SpectralField:
    """Real scalar field on a ``PeriodicGrid`` with a lazily cached spectrum."""

    __slots__ = ("grid", "values", "_spectrum", "_band_values")

    def __init__(self, grid: PeriodicGrid, values, spectrum=None):
        values = np.asarray(values, dtype=float)
        if values.shape != (grid.n_nodes,):
            raise UsageError(f"values shape {values.shape} does not match grid with {grid.n_nodes} nodes")
        self.grid = grid
        self.values = values
        self._spectrum = spectrum
        self._band_values = None

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_function(cls, grid: PeriodicGrid, fn) -> "SpectralField":
        return cls(grid, fn(grid.nodes))

    @classmethod
    def from_spectrum(cls, grid: PeriodicGrid, spec) -> "SpectralField":
        """Build a field from coefficients; they must be Hermitian-symmetric."""
        spec = np.asarray(spec, dtype=complex)
        if spec.shape != (grid.n_nodes,):
            raise UsageError("spectrum length must equal n_nodes")
        n = grid.n_nodes
        mirrored = np.conj(np.roll(spec[::-1], 1))  # coefficient at -k
        scale = np.max(np.abs(spec)) or 1.0
        if np.max(np.abs(spec - mirrored)) > 1e-10 * scale or abs(spec[n // 2].imag) > 1e-10 * scale:
            raise UsageError("spectrum is not Hermitian-symmetric; field would not be real")
        spec = _hermitianize(spec)
        values = np.fft.ifft(spec * grid.phase * n).real
        return cls(grid, values, spectrum=spec)

    @classmethod
    def zeros(cls, grid: PeriodicGrid) -> "SpectralField":
        return cls(grid, np.zeros(grid.n_nodes))

    # -- spectrum ---------------------------------------------------------

    @property
    def spectrum(self) -> np.ndarray:
        """Coefficients (1/n) sum_j f(x_j) e^(-i k x_j), cached after first use."""
        if self._spectrum is None:
            self._spectrum = self.grid.phase * np.fft.fft(self.values) / self.grid.n_nodes
        return self._spectrum

    def _dealiased_values(self) -> np.ndarray:
        """Values with the top-third modes removed (cached; idempotent)."""
        if self._band_values is None:
            grid = self.grid
            spec = np.where(grid.dealias_keep, self.spectrum, 0.0)
            self._band_values = np.fft.ifft(spec * grid.phase * grid.n_nodes).real
        return self._band_values

    def coefficient(self, k: int) -> complex:
        """Coefficient at integer mode ``k`` (supports negative k)."""
        n = self.grid.n_nodes
        if not -n // 2 <= k < n // 2:
            raise UsageError(f"mode {k} not resolved on an {n}-node grid")
        return complex(self.spectrum[k % n])

    def mean(self) -> float:
        return float(np.mean(self.values))

    # -- arithmetic (scalar and field addition only; products must go
    #    through dealiased_product so aliasing never sneaks in) -----------

    def _check_same_grid(self, other: "SpectralField"):
        if other.grid is not self.grid and (other.grid.n_nodes != self.grid.n_nodes
                                            or other.grid.length != self.grid.length):
            raise UsageError("fields live on different grids")

    def __add__(self, other):
        if isinstance(other, SpectralField):
            self._check_same_grid(other)
            return SpectralField(self.grid, self.values + other.values)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, SpectralField):
            self._check_same_grid(other)
            return SpectralField(self.grid, self.values - other.values)
        return NotImplemented

    def __mul__(self, scalar):
        if isinstance(scalar, (int, float, np.floating, np.integer)):
            return SpectralField(self.grid, self.values * float(scalar))
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return SpectralField(self.grid, -self.values)

    def __repr__(self):
        return f"SpectralField(n={self.grid.n_nodes}, max|f|={np.max(np.abs(self.values)):.3g})"


# ---------------------------------------------------------------------------
# multiplier symbols
# ---------------------------------------------------------------------------

def _hilbert_factors(k: np.ndarray, params: tuple) -> np.ndarray:
    return -1j * np.sign(k)


def _lambda_factors(k: np.ndarray, params: tuple) -> np.ndarray:
    (s,) = params
    out = np.zeros_like(k, dtype=complex)
    nz = k != 0
    out[nz] = np.abs(k[nz]) ** s
    return out


def _derivative_factors(k: np.ndarray, params: tuple) -> np.ndarray:
    (m,) = params
    return (1j * k) ** m


def _resolvent_n_factors(k: np.ndarray, params: tuple) -> np.ndarray:
    alpha1, alpha2 = params
    c = 0.5 * (alpha1 + alpha2)
    return (1.0 - c * 1j * k) / (1.0 + (c * k) ** 2)


def _resolvent_m_factors(k: np.ndarray, params: tuple) -> np.ndarray:
    (alpha,) = params
    return 1.0 / (2.0 + alpha * np.abs(k)) + 0j


def _resolvent_p_factors(k: np.ndarray, params: tuple) -> np.ndarray:
    return 1.0 / (1.0 + k ** 2) + 0j


# table is module-level so a deliberate-bug mutation (e.g. flipping the
# Hilbert sign in a test) is observable through the invariant suite
_SYMBOL_TABLE = {
    "hilbert": _hilbert_factors,
    "lambda_pow": _lambda_factors,
    "derivative": _derivative_factors,
    "resolvent_N": _resolvent_n_factors,
    "resolvent_M": _resolvent_m_factors,
    "resolvent_P": _resolvent_p_factors,
}


@dataclass(frozen=True)
class MultiplierSymbol:
    """Fourier multiplier identified by name plus its numeric parameters.

    Use the constructors (``MultiplierSymbol.hilbert()`` etc.) rather than
    instantiating directly.
    """

    id: str
    params: tuple = ()

    @classmethod
    def hilbert(cls):
        return cls("hilbert")

    @classmethod
    def lambda_pow(cls, s: float):
        return cls("lambda_pow", (float(s),))

    @classmethod
    def derivative(cls, m: int):
        if m < 0 or int(m) != m:
            raise ConfigError(f"derivative order must be a nonnegative integer, got {m!r}")
        return cls("derivative", (int(m),))

    @classmethod
    def resolvent_N(cls, alpha1: float, alpha2: float):
        return cls("resolvent_N", (float(alpha1), float(alpha2)))

    @classmethod
    def resolvent_M(cls, alpha: float):
        return cls("resolvent_M", (float(alpha),))

    @classmethod
    def resolvent_P(cls):
        return cls("resolvent_P")

    def factors(self, grid: PeriodicGrid) -> np.ndarray:
        """Evaluate the symbol at every resolved wavenumber of ``grid``."""
        try:
            fn = _SYMBOL_TABLE[self.id]
        except KeyError:
            raise ConfigError(f"unknown multiplier symbol {self.id!r}") from None
        return _cached_factors(self, grid, fn)

    def __call__(self, k) -> complex:
        """Point evaluation at a single (physical) wavenumber."""
        return complex(_SYMBOL_TABLE[self.id](np.atleast_1d(np.asarray(k, dtype=float)), self.params)[0])


@lru_cache(maxsize=256)
def _cached_factors(symbol: MultiplierSymbol, grid: PeriodicGrid, fn) -> np.ndarray:
    # keyed on the evaluator fn as well, so a patched symbol table is honored
    out = np.asarray(fn(grid.wavenumbers, symbol.params), dtype=complex)
    out.flags.writeable = False
    return out


def apply_factors(f: SpectralField, factors: np.ndarray) -> SpectralField:
    """Multiply the spectrum by a precomputed factor array (must be Hermitian)."""
    spec = _hermitianize(factors * f.spectrum)
    values = np.fft.ifft(spec * f.grid.phase * f.grid.n_nodes).real
    return SpectralField(f.grid, values, spectrum=spec)


def apply_symbol(f: SpectralField, s: MultiplierSymbol) -> SpectralField:
    """Apply a Fourier multiplier: result coefficient at k is symbol(k)*fhat(k)."""
    if not np.all(np.isfinite(f.values)):
        raise NumericError("apply_symbol: field contains non-finite values")
    return apply_factors(f, s.factors(f.grid))


# shorthand wrappers used heavily by the model assemblers

def hilbert(f: SpectralField) -> SpectralField:
    return apply_symbol(f, MultiplierSymbol.hilbert())


def lam(f: SpectralField, s: float = 1.0) -> SpectralField:
    return apply_symbol(f, MultiplierSymbol.lambda_pow(s))


def deriv(f: SpectralField, m: int = 1) -> SpectralField:
    return apply_symbol(f, MultiplierSymbol.derivative(m))


# ---------------------------------------------------------------------------
# dealiased products and commutators
# ---------------------------------------------------------------------------

def dealias(f: SpectralField) -> SpectralField:
    """Zero every mode above the 2/3 cutoff (|k| > n//3)."""
    grid = f.grid
    spec = _hermitianize(np.where(grid.dealias_keep, f.spectrum, 0.0))
    values = np.fft.ifft(spec * grid.phase * grid.n_nodes).real
    out = SpectralField(grid, values, spectrum=spec)
    out._band_values = values
    return out


def _masked_product_spectrum(grid: PeriodicGrid, fv: np.ndarray, gv: np.ndarray) -> np.ndarray:
    return np.where(grid.dealias_keep, grid.phase * np.fft.fft(fv * gv) / grid.n_nodes, 0.0)


def dealiased_product(f: SpectralField, g: SpectralField) -> SpectralField:
    """Pointwise product with quadratic aliasing removed by the 2/3 rule.

    Both factors are truncated to |k| <= n//3 before multiplying and the
    product is truncated again, so every retained mode is alias-free.
    """
    f._check_same_grid(g)
    grid = f.grid
    spec = _hermitianize(_masked_product_spectrum(grid, f._dealiased_values(), g._dealiased_values()))
    values = np.fft.ifft(spec * grid.phase * grid.n_nodes).real
    out = SpectralField(grid, values, spectrum=spec)
    out._band_values = values
    return out


_COMMUTATOR_OPS = {
    "hilbert": MultiplierSymbol.hilbert(),
    "second_derivative": MultiplierSymbol.derivative(2),
}


def commutator(kind: str, a: SpectralField, b: SpectralField) -> SpectralField:
    """Commutator [T, a] b = T(ab) - a T(b) with T = H or d^2/dx^2.

    Products are dealiased, matching how the commutators enter the model
    right-hand sides.  Assembled in spectral space: the result equals
    T(dealiased_product(a, b)) - dealiased_product(a, T(b)) exactly.
    """
    try:
        sym = _COMMUTATOR_OPS[kind]
    except KeyError:
        raise UsageError(f"commutator kind must be one of {sorted(_COMMUTATOR_OPS)}, got {kind!r}") from None
    a._check_same_grid(b)
    grid = a.grid
    factors = sym.factors(grid)
    av = a._dealiased_values()
    # band-limited values of T(b): the diagonal multiplier commutes with the mask
    tb = np.fft.ifft(np.where(grid.dealias_keep, factors * b.spectrum, 0.0)
                     * grid.phase * grid.n_nodes).real
    spec = _hermitianize(factors * _masked_product_spectrum(grid, av, b._dealiased_values())
                         - _masked_product_spectrum(grid, av, tb))
    values = np.fft.ifft(spec * grid.phase * grid.n_nodes).real
    out = SpectralField(grid, values, spectrum=spec)
    out._band_values = values
    return out


def project_zero_mean(f: SpectralField) -> SpectralField:
    """Remove the spatial mean (the k=0 Fourier coefficient)."""
    return SpectralField(f.grid, f.values - np.mean(f.values))
