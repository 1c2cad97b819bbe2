"""Closed-curve interface dynamics.

The z-model evolves a closed planar curve z = (z1, z2) together with the
vortex-sheet strength on it; the Kelvin-Helmholtz variants freeze the sheet
strength at its initial value.  ``br_velocity`` is the reference
Birkhoff-Rott principal-value quadrature (alternating-point trapezoidal
rule), and ``laurent_coeffs`` evaluates the first three coefficients of the
kernel's Laurent expansion, which power the refined KH model.

The perpendicular convention is a^perp = (a2, -a1) throughout.  Curvature is
oriented so the unit circle (cos a, sin a) has curvature +1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GeometryError, PreconditionError, UsageError
from .params import ModelParams
from .spectral import (
    SpectralField,
    dealias,
    dealiased_product,
    deriv,
    hilbert,
)

CURVE_MODEL_IDS = ("zmodel", "kh", "kh-refined", "br-reference")

_TANGENT_TOL = 1e-12


def perp(v):
    """Rotate a planar vector by -pi/2: (a1, a2) -> (a2, -a1).

    Accepts any (a1, a2) pair - scalars, arrays or SpectralFields - and
    returns the same kind of pair.
    """
    a1, a2 = v
    return (a2, -a1)


@dataclass
class CurveState:
    """Closed curve (z1, z2) plus sheet strength, all on one grid.

    The constructor rejects degenerate parametrizations (vanishing tangent);
    simplicity of the curve is monitored by the diagnostics module rather
    than re-checked on every evaluation.
    """

    z1: SpectralField
    z2: SpectralField
    vorticity: SpectralField

    def __post_init__(self):
        self.z1._check_same_grid(self.z2)
        self.z1._check_same_grid(self.vorticity)
        for f in (self.z1, self.z2, self.vorticity):
            if not np.all(np.isfinite(f.values)):
                raise UsageError("CurveState fields must be finite")
        _tangent(self)  # raises GeometryError when degenerate

    @property
    def grid(self):
        return self.z1.grid


@dataclass
class LaurentCoeffs:
    """Per-node planar coefficient fields of the kernel expansion."""

    o_minus1: tuple[SpectralField, SpectralField]
    o_zero: tuple[SpectralField, SpectralField]
    o_one: tuple[SpectralField, SpectralField]


def _tangent(c: CurveState):
    """Spectral tangent (dz1, dz2) and squared speed; rejects degeneracy."""
    dz1 = deriv(c.z1)
    dz2 = deriv(c.z2)
    jac2 = dz1.values ** 2 + dz2.values ** 2
    if np.min(jac2) <= _TANGENT_TOL ** 2:
        raise GeometryError("degenerate curve: |dz/dalpha| vanishes at a node")
    return dz1, dz2, jac2


def curvature(c: CurveState) -> SpectralField:
    """Signed curvature det(z', z'') / |z'|^3 (unit circle -> +1)."""
    dz1, dz2, jac2 = _tangent(c)
    ddz1 = deriv(c.z1, 2)
    ddz2 = deriv(c.z2, 2)
    num = dz1.values * ddz2.values - dz2.values * ddz1.values
    return SpectralField(c.grid, num / jac2 ** 1.5)


def _sheet_velocity(c: CurveState, strength: SpectralField):
    """Common z-model velocity law: -(1/2) H(strength) * z'^perp / |z'|^2."""
    dz1, dz2, jac2 = _tangent(c)
    hw = hilbert(strength)
    q = dealias(SpectralField(c.grid, hw.values / jac2))
    # perp(z') = (dz2, -dz1)
    u1 = -0.5 * dealiased_product(q, dz2)
    u2 = 0.5 * dealiased_product(q, dz1)
    return u1, u2, (dz1, dz2, jac2)


def zmodel_rhs(c: CurveState, p: ModelParams):
    """Full z-model: returns (z1_t, z2_t, vorticity_t).

    The pressure jump at the interface is the surface-tension law
    gamma * curvature; with gamma = 0 that term drops out entirely.
    """
    u1, u2, (dz1, dz2, jac2) = _sheet_velocity(c, c.vorticity)
    w = c.vorticity
    tric = hilbert(dealiased_product(w, hilbert(w)))
    bracket = dealias(SpectralField(c.grid, 0.5 * p.atwood * tric.values / jac2))
    if p.surface_tension != 0.0:
        jump = (2.0 * p.surface_tension / p.density_sum) * dealias(curvature(c))
        bracket = bracket - jump
    bracket = bracket - (2.0 * p.atwood * p.gravity) * c.z2
    w_t = -deriv(bracket)
    return u1, u2, w_t


def kh_rhs(c: CurveState, w0: SpectralField):
    """Kelvin-Helmholtz z-model with frozen sheet strength: returns (z1_t, z2_t)."""
    u1, u2, _ = _sheet_velocity(c, w0)
    return u1, u2


def laurent_coeffs(c: CurveState) -> LaurentCoeffs:
    """First three Laurent coefficients of the Birkhoff-Rott kernel.

    O_{-1} = -z'^perp / |z'|^2 is the principal part the z-model keeps; O_0
    and O_1 are the next two corrections (O_1 feeds the refined KH model).
    """
    dz1, dz2, jac2 = _tangent(c)
    ddz1, ddz2 = deriv(c.z1, 2), deriv(c.z2, 2)
    dddz1, dddz2 = deriv(c.z1, 3), deriv(c.z2, 3)
    grid = c.grid

    p1, p2 = dz2.values, -dz1.values          # z'^perp
    pp1, pp2 = ddz2.values, -ddz1.values      # z''^perp
    ppp1, ppp2 = dddz2.values, -dddz1.values  # z'''^perp
    dot12 = dz1.values * ddz1.values + dz2.values * ddz2.values    # z'.z''
    dot13 = dz1.values * dddz1.values + dz2.values * dddz2.values  # z'.z'''
    sq2 = ddz1.values ** 2 + ddz2.values ** 2                      # |z''|^2

    om1 = (-p1 / jac2, -p2 / jac2)
    o0 = (-p1 * dot12 / jac2 ** 2 - 0.5 * pp1 / jac2,
          -p2 * dot12 / jac2 ** 2 - 0.5 * pp2 / jac2)
    o1_1 = (-ppp1 / (6.0 * jac2) + p1 * dot13 / (3.0 * jac2 ** 2)
            + 0.5 * pp1 * dot12 / jac2 ** 2 + 0.25 * p1 * sq2 / jac2 ** 2
            - p1 * dot12 ** 2 / jac2 ** 3)
    o1_2 = (-ppp2 / (6.0 * jac2) + p2 * dot13 / (3.0 * jac2 ** 2)
            + 0.5 * pp2 * dot12 / jac2 ** 2 + 0.25 * p2 * sq2 / jac2 ** 2
            - p2 * dot12 ** 2 / jac2 ** 3)

    as_field = lambda a: SpectralField(grid, a)
    return LaurentCoeffs(
        o_minus1=(as_field(om1[0]), as_field(om1[1])),
        o_zero=(as_field(o0[0]), as_field(o0[1])),
        o_one=(as_field(o1_1), as_field(o1_2)),
    )


def strength_first_moment(w0: SpectralField) -> float:
    """(1/2pi) * integral of beta * w0(beta) over one period.

    Computed by exact integration of the trigonometric interpolant,
    sum_{k != 0} w0hat(k) (-1)^k / (i k), so band-limited strengths give the
    exact moment (plain trapezoid is only O(n^-2) here because beta*w0 is not
    periodic-smooth).
    """
    spec = w0.spectrum
    k = w0.grid.mode_index()
    nz = k != 0
    terms = spec[nz] * ((-1.0) ** np.abs(k[nz])) / (1j * k[nz])
    return float(np.sum(terms).real)


def refined_kh_rhs(c: CurveState, w0: SpectralField):
    """Refined KH model: principal z-model velocity plus the first-moment
    correction -O_1(alpha) * m1 with m1 = (1/2pi) int beta w0(beta) dbeta.

    Requires the sheet strength to have zero integral (checked to 1e-10).
    """
    total = abs(w0.spectrum[0].real) * 2.0 * np.pi
    if total > 1e-10:
        raise PreconditionError(
            f"refined KH model needs integral of the sheet strength = 0, got {total:.3e}")
    u1, u2 = kh_rhs(c, w0)
    m1 = strength_first_moment(w0)
    if m1 != 0.0:
        o1 = laurent_coeffs(c).o_one
        u1 = u1 - m1 * o1[0]
        u2 = u2 - m1 * o1[1]
    return u1, u2


def br_velocity(c: CurveState, strength: SpectralField):
    """Reference Birkhoff-Rott velocity by the alternating-point trapezoidal
    rule: target node j sums over source nodes of opposite parity with weight
    2*dbeta, which is spectrally accurate for the principal-value integral.

    Returns (u1, u2) as SpectralFields.  O(n^2); summation order is fixed so
    results are bit-reproducible.
    """
    _tangent(c)  # validate non-degenerate
    grid = c.grid
    n = grid.n_nodes
    z1, z2, w = c.z1.values, c.z2.values, strength.values
    d1 = z1[:, None] - z1[None, :]
    d2 = z2[:, None] - z2[None, :]
    r2 = d1 ** 2 + d2 ** 2
    parity = (np.arange(n)[:, None] - np.arange(n)[None, :]) % 2 == 1
    if np.min(r2[parity]) < 1e-24:
        raise GeometryError("coincident nodes in Birkhoff-Rott quadrature")
    kernel = np.where(parity, 1.0 / np.where(parity, r2, 1.0), 0.0)
    # (1/2pi) * sum w_l K(j,l) * 2*dbeta  with dbeta = length/n
    scale = 2.0 * grid.spacing / (2.0 * np.pi)
    u1 = scale * ((-d2 * kernel) @ w)
    u2 = scale * ((d1 * kernel) @ w)
    return SpectralField(grid, u1), SpectralField(grid, u2)
