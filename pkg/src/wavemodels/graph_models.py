"""Right-hand sides for the graph-based interface models.

Four families, each in bidirectional form (second order in time, integrated
as a first-order system in (h, v = h_t)) and unidirectional form (first order
in time for the far-field profile f):

* viscous        - shear viscosity, damping alpha1/alpha2, smoother N
* odd            - odd (Hall) viscosity alpha, smoother M = (2 + alpha*Lambda)^-1
* inviscid       - the alpha = 0 specialization of both
* internal       - two-fluid internal waves with Atwood number A, plus the
                   first-order (h, vorticity) system it derives from

Every quadratic nonlinearity goes through the dealiased product, and every
unidirectional form requires a zero-mean profile because it applies
Lambda^-1.  The linear part of each model is one Fourier multiplier; it is
assembled as a single cached factor array so an RHS evaluation costs a
handful of transforms.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ParameterError, PreconditionError, UsageError
from .params import ModelParams
from .spectral import (
    MultiplierSymbol,
    PeriodicGrid,
    SpectralField,
    apply_factors,
    commutator,
    dealiased_product,
    deriv,
    hilbert,
    lam,
    project_zero_mean,
)

MEAN_TOL = 1e-8

GRAPH_MODEL_IDS = (
    "viscous-bi", "viscous-uni", "viscous-uni-full",
    "odd-bi", "odd-uni",
    "inviscid-bi", "inviscid-uni",
    "internal-bi", "internal-uni", "internal-sys",
)


@dataclass
class GraphState:
    """Interface elevation h and its velocity v = h_t (bidirectional models)."""

    h: SpectralField
    v: SpectralField

    def __post_init__(self):
        self.h._check_same_grid(self.v)
        if not (np.all(np.isfinite(self.h.values)) and np.all(np.isfinite(self.v.values))):
            raise UsageError("GraphState fields must be finite")


@dataclass
class WaveProfile:
    """Zero-mean profile f of a unidirectional model (f = Lambda h far field)."""

    f: SpectralField

    def __post_init__(self):
        if not np.all(np.isfinite(self.f.values)):
            raise UsageError("WaveProfile must be finite")
        if abs(self.f.mean()) > MEAN_TOL * (1.0 + np.max(np.abs(self.f.values))):
            raise PreconditionError(
                f"unidirectional profile must have zero mean, got mean={self.f.mean():.3e}")


def _require_positive_epsilon(p: ModelParams):
    if p.epsilon <= 0:
        raise ParameterError("unidirectional forms divide by epsilon; epsilon must be > 0")


def _checked_profile(state, p: ModelParams) -> SpectralField:
    if not isinstance(state, WaveProfile):
        raise UsageError("unidirectional forms take a WaveProfile")
    _require_positive_epsilon(p)
    # tiny rounding drift in the mean is projected away before Lambda^-1
    return project_zero_mean(state.f)


def _checked_graph(state) -> GraphState:
    if not isinstance(state, GraphState):
        raise UsageError("bidirectional forms take a GraphState")
    return state


# ---------------------------------------------------------------------------
# cached linear factor arrays (one multiplier per model and field)
# ---------------------------------------------------------------------------

def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@lru_cache(maxsize=128)
def _bi_factors(grid: PeriodicGrid, family: str, beta: float, a1: float, a2: float,
                alpha: float, atwood: float):
    """(factor on h, factor on v or None) for the linearized bidirectional models."""
    k = grid.wavenumbers
    ak = np.abs(k)
    if family == "viscous":
        on_h = -(ak + beta * ak ** 3 + a1 * a2 * k ** 4) + 0j
        on_v = (a1 + a2) * (1j * k) ** 2
    elif family == "odd":
        on_h = -(ak + beta * ak ** 3) + 0j
        on_v = alpha * 1j * k * ak
    elif family == "inviscid":
        on_h = -(ak + beta * ak ** 3) + 0j
        on_v = None
    else:  # internal
        on_h = atwood * ak - beta * ak ** 3 + 0j
        on_v = None
    return _frozen(on_h), None if on_v is None else _frozen(on_v)


@lru_cache(maxsize=128)
def _uni_factors(grid: PeriodicGrid, model_id: str, beta: float, a1: float, a2: float,
                 alpha: float, atwood: float):
    """Linear multiplier of the unidirectional models, before the 1/(2 eps)
    (or 1/eps) scaling; also the resolvent factor used on the nonlinear brace."""
    k = grid.wavenumbers
    ik = 1j * k
    msgn = -1j * np.sign(k)
    if model_id in ("viscous-uni", "viscous-uni-full"):
        resolvent = MultiplierSymbol.resolvent_N(a1, a2).factors(grid)
        lin = resolvent * (ik + (a1 + a2) * ik ** 2 + msgn
                           - beta * msgn * ik ** 2 + a1 * a2 * ik ** 3)
    elif model_id == "odd-uni":
        resolvent = MultiplierSymbol.resolvent_M(alpha).factors(grid)
        lin = resolvent * (ik + msgn + (alpha - beta) * msgn * ik ** 2)
    elif model_id == "inviscid-uni":
        resolvent = None
        lin = ik + msgn - beta * msgn * ik ** 2
    else:  # internal-uni
        resolvent = None
        lin = ik - atwood * msgn - beta * msgn * ik ** 2
    return _frozen(np.asarray(lin, dtype=complex)), resolvent


def unidirectional_symbol(model_id: str, k: int, p: ModelParams) -> complex:
    """Per-mode growth factor lambda(k) of the linearized unidirectional models
    (f_t = lambda f for a single mode).  Oracle for dispersion and decay tests."""
    ik = 1j * k
    msgn = -1j * np.sign(k)
    _require_positive_epsilon(p)
    if model_id in ("viscous-uni", "viscous-uni-full"):
        nsym = MultiplierSymbol.resolvent_N(p.alpha1, p.alpha2)(k)
        bracket = (ik + (p.alpha1 + p.alpha2) * ik ** 2 + msgn
                   - p.beta * msgn * ik ** 2 + p.alpha1 * p.alpha2 * ik ** 3)
        return complex(nsym * bracket / (2.0 * p.epsilon))
    if model_id == "odd-uni":
        msym = MultiplierSymbol.resolvent_M(p.alpha)(k)
        return complex(msym * (ik + msgn + (p.alpha - p.beta) * msgn * ik ** 2) / p.epsilon)
    if model_id == "inviscid-uni":
        return complex((ik + msgn - p.beta * msgn * ik ** 2) / (2.0 * p.epsilon))
    if model_id == "internal-uni":
        return complex((ik - p.atwood * msgn - p.beta * msgn * ik ** 2) / (2.0 * p.epsilon))
    raise UsageError(f"no unidirectional symbol for model {model_id!r}")


# ---------------------------------------------------------------------------
# viscous family
# ---------------------------------------------------------------------------

def rhs_viscous(state, p: ModelParams, form: str = "bidirectional"):
    """Shear-viscosity h-model.

    bidirectional      -> GraphState derivative (h_t, v_t)
    unidirectional     -> WaveProfile derivative, O(eps*a1*a2) and O(eps*a2^2)
                          commutator terms dropped
    unidirectional_full-> keeps those two extra commutator terms
    """
    eps, beta, a1, a2 = p.epsilon, p.beta, p.alpha1, p.alpha2
    if form == "bidirectional":
        st = _checked_graph(state)
        h, v = st.h, st.v
        on_h, on_v = _bi_factors(h.grid, "viscous", beta, a1, a2, 0.0, 0.0)
        v_t = apply_factors(h, on_h) + apply_factors(v, on_v)
        if eps != 0.0:
            hv = hilbert(v)
            d2h = deriv(h, 2)
            in_deriv = commutator("hilbert", h, lam(h))
            if beta != 0.0:
                in_deriv = in_deriv + beta * commutator("hilbert", h, lam(h, 3))
            if a2 != 0.0:
                in_deriv = in_deriv + a2 * commutator("hilbert", hv, hilbert(d2h))
                in_deriv = in_deriv - a2 ** 2 * commutator("hilbert", d2h, d2h)
            if a1 != 0.0 and a2 != 0.0:
                in_deriv = in_deriv + a1 * a2 * commutator("second_derivative", h, lam(deriv(h)))
            if a1 != 0.0:
                in_deriv = in_deriv - a1 * commutator("second_derivative", h, hv)
            in_lam = -1.0 * dealiased_product(hv, hv)
            if a2 != 0.0:
                in_lam = in_lam + a2 * dealiased_product(hv, hilbert(d2h))
            v_t = v_t + eps * (lam(in_lam) + deriv(in_deriv))
        return GraphState(h=v, v=v_t)

    if form in ("unidirectional", "unidirectional_full"):
        f = _checked_profile(state, p)
        lin, resolvent = _uni_factors(f.grid, "viscous-uni", beta, a1, a2, 0.0, 0.0)
        linear = apply_factors(f, lin)
        d1f = deriv(f)
        g = lam(f, -1.0)
        p_ff = dealiased_product(f, d1f)
        in_lam = commutator("hilbert", g, f)
        if beta != 0.0:
            in_lam = in_lam + beta * commutator("hilbert", g, lam(f, 2))
        if a2 != 0.0:
            in_lam = in_lam - a2 * commutator("hilbert", f, d1f)
        if a1 != 0.0:
            in_lam = in_lam + a1 * commutator("second_derivative", g, f)
        braces = 2.0 * p_ff + lam(in_lam)
        if a2 != 0.0:
            braces = braces + a2 * deriv(p_ff)
        if form == "unidirectional_full":
            extra = SpectralField.zeros(f.grid)
            if a1 != 0.0 and a2 != 0.0:
                extra = extra + a1 * a2 * commutator("second_derivative", g, d1f)
            if a2 != 0.0:
                lamf = lam(f)
                extra = extra - a2 ** 2 * commutator("hilbert", lamf, lamf)
            braces = braces + lam(extra)
        f_t = (1.0 / (2.0 * eps)) * (linear - eps * apply_factors(braces, resolvent))
        return WaveProfile(f=f_t)

    raise UsageError(f"unknown form {form!r}")


# ---------------------------------------------------------------------------
# odd-viscosity family
# ---------------------------------------------------------------------------

def rhs_odd(state, p: ModelParams, form: str = "bidirectional"):
    """Gravity-capillary waves in a fluid with odd (Hall) viscosity alpha."""
    eps, beta, a = p.epsilon, p.beta, p.alpha
    if form == "bidirectional":
        st = _checked_graph(state)
        h, v = st.h, st.v
        on_h, on_v = _bi_factors(h.grid, "odd", beta, 0.0, 0.0, a, 0.0)
        v_t = apply_factors(h, on_h) + apply_factors(v, on_v)
        if eps != 0.0:
            hv = hilbert(v)
            in_deriv = commutator("hilbert", h, lam(h))
            if a != 0.0:
                in_deriv = in_deriv - a * commutator("hilbert", h, lam(deriv(v)))
            if beta != 0.0:
                in_deriv = in_deriv + beta * commutator("hilbert", h, lam(h, 3))
            v_t = v_t + eps * (deriv(in_deriv) - lam(dealiased_product(hv, hv)))
        return GraphState(h=v, v=v_t)

    if form == "unidirectional":
        f = _checked_profile(state, p)
        lin, resolvent = _uni_factors(f.grid, "odd-uni", beta, 0.0, 0.0, a, 0.0)
        linear = apply_factors(f, lin)
        d1f = deriv(f)
        g = lam(f, -1.0)
        in_lam = -1.0 * commutator("hilbert", g, f)
        if a != beta:
            in_lam = in_lam + (a - beta) * commutator("hilbert", g, lam(f, 2))
        braces = lam(in_lam) - 2.0 * dealiased_product(f, d1f)
        f_t = (1.0 / eps) * (linear + eps * apply_factors(braces, resolvent))
        return WaveProfile(f=f_t)

    raise UsageError(f"unknown form {form!r}")


# ---------------------------------------------------------------------------
# inviscid family (the alpha = 0 specialization, kept as its own assembler)
# ---------------------------------------------------------------------------

def rhs_inviscid(state, p: ModelParams, form: str = "bidirectional"):
    """Quadratic h-model for perfect fluids; must agree with the viscous and
    odd assemblers at alpha = alpha1 = alpha2 = 0."""
    eps, beta = p.epsilon, p.beta
    if form == "bidirectional":
        st = _checked_graph(state)
        h, v = st.h, st.v
        on_h, _ = _bi_factors(h.grid, "inviscid", beta, 0.0, 0.0, 0.0, 0.0)
        v_t = apply_factors(h, on_h)
        if eps != 0.0:
            hv = hilbert(v)
            in_deriv = commutator("hilbert", h, lam(h))
            if beta != 0.0:
                in_deriv = in_deriv + beta * commutator("hilbert", h, lam(h, 3))
            v_t = v_t + eps * (deriv(in_deriv) - lam(dealiased_product(hv, hv)))
        return GraphState(h=v, v=v_t)

    if form == "unidirectional":
        f = _checked_profile(state, p)
        lin, _ = _uni_factors(f.grid, "inviscid-uni", beta, 0.0, 0.0, 0.0, 0.0)
        linear = apply_factors(f, lin)
        g = lam(f, -1.0)
        in_lam = commutator("hilbert", g, f)
        if beta != 0.0:
            in_lam = in_lam + beta * commutator("hilbert", g, lam(f, 2))
        braces = 2.0 * dealiased_product(f, deriv(f)) + lam(in_lam)
        f_t = (1.0 / (2.0 * eps)) * (linear - eps * braces)
        return WaveProfile(f=f_t)

    raise UsageError(f"unknown form {form!r}")


# ---------------------------------------------------------------------------
# internal-wave family
# ---------------------------------------------------------------------------

def rhs_internal(state, p: ModelParams, form: str = "bidirectional"):
    """Internal-wave h-model with Atwood number A.

    ``first_order_system`` takes and returns an (h, vorticity) pair of
    SpectralFields; gravity enters there explicitly as 2*A*g*h, while the
    wave forms are dimensionless (g absorbed).
    """
    A = p.atwood
    if form == "bidirectional":
        st = _checked_graph(state)
        h, v = st.h, st.v
        on_h, _ = _bi_factors(h.grid, "internal", p.beta, 0.0, 0.0, 0.0, A)
        v_t = apply_factors(h, on_h) - A * deriv(dealiased_product(hilbert(v), v))
        return GraphState(h=v, v=v_t)

    if form == "unidirectional":
        f = _checked_profile(state, p)
        lin, _ = _uni_factors(f.grid, "internal-uni", p.beta, 0.0, 0.0, 0.0, A)
        nonlinear = (A * p.epsilon) * deriv(dealiased_product(hilbert(f), f))
        f_t = (1.0 / (2.0 * p.epsilon)) * (apply_factors(f, lin) + nonlinear)
        return WaveProfile(f=f_t)

    if form == "first_order_system":
        if not (isinstance(state, tuple) and len(state) == 2):
            raise UsageError("first_order_system takes an (h, vorticity) pair")
        h, w = state
        h._check_same_grid(w)
        hw = hilbert(w)
        h_t = 0.5 * hw
        bracket = (0.25 * A * dealiased_product(hw, hw)
                   - 0.25 * A * dealiased_product(w, w)
                   - (2.0 * A * p.gravity) * h)
        w_t = -1.0 * deriv(bracket)
        return (h_t, w_t)

    raise UsageError(f"unknown form {form!r}")


# ---------------------------------------------------------------------------
# analytic single-mode oracles
# ---------------------------------------------------------------------------

_FAMILY_ALIASES = {
    "viscous": "viscous", "viscous-bi": "viscous",
    "odd": "odd", "odd-bi": "odd",
    "inviscid": "inviscid", "inviscid-bi": "inviscid",
    "internal": "internal", "internal-bi": "internal",
}


def mode_coefficients(model_id: str, k: int, p: ModelParams) -> tuple[complex, complex]:
    """(D, Omega) of the per-mode linear ODE  hhat'' + D hhat' + Omega hhat = 0."""
    try:
        family = _FAMILY_ALIASES[model_id]
    except KeyError:
        raise UsageError(f"no linearized bidirectional form for model {model_id!r}") from None
    ak = abs(k)
    if family == "viscous":
        return complex((p.alpha1 + p.alpha2) * k * k), complex(ak + p.beta * ak ** 3 + p.alpha1 * p.alpha2 * k ** 4)
    if family == "odd":
        return complex(-1j * p.alpha * k * ak), complex(ak + p.beta * ak ** 3)
    if family == "inviscid":
        return 0j, complex(ak + p.beta * ak ** 3)
    return 0j, complex(-p.atwood * ak + p.beta * ak ** 3)


def linear_mode_solution(model_id: str, k: int, p: ModelParams, t: float,
                         h0: complex, v0: complex) -> tuple[complex, complex]:
    """Exact single-mode solution of the linearized bidirectional model.

    ``h0``/``v0`` are the Fourier coefficient of the mode and its time
    derivative at t=0; the returned pair is their exact value at time t.  The
    damping coefficient is complex for the odd model (Lambda d/dx mixes the
    cosine and sine parts), real for the others.
    """
    if k == 0:
        raise UsageError("linear_mode_solution requires k != 0")
    D, Om = mode_coefficients(model_id, k, p)
    disc = np.sqrt(complex(D * D - 4.0 * Om))
    lam_p = 0.5 * (-D + disc)
    lam_m = 0.5 * (-D - disc)
    if abs(lam_p - lam_m) > 1e-12 * max(1.0, abs(lam_p), abs(lam_m)):
        c_p = (v0 - lam_m * h0) / (lam_p - lam_m)
        c_m = (lam_p * h0 - v0) / (lam_p - lam_m)
        h = c_p * np.exp(lam_p * t) + c_m * np.exp(lam_m * t)
        v = c_p * lam_p * np.exp(lam_p * t) + c_m * lam_m * np.exp(lam_m * t)
    else:
        # repeated root: (1, t) basis
        lam0 = lam_p
        b = v0 - lam0 * h0
        h = (h0 + b * t) * np.exp(lam0 * t)
        v = (v0 + b * lam0 * t) * np.exp(lam0 * t)
    return complex(h), complex(v)
