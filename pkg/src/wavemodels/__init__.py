"""Pseudospectral solvers for nonlocal interface-wave models.

Graph-based h-models (viscous, odd-viscosity, inviscid, internal) in
bidirectional and unidirectional form, curve-based z-models including the
refined Kelvin-Helmholtz model, a reference Birkhoff-Rott quadrature, an
adaptive RK45 integrator, and diagnostics that turn the two well-posedness
theorems into runtime monitors.
"""

from .curve_models import (
    CurveState,
    LaurentCoeffs,
    br_velocity,
    curvature,
    kh_rhs,
    laurent_coeffs,
    perp,
    refined_kh_rhs,
    zmodel_rhs,
)
from .diagnostics import (
    NormSeries,
    StripMonitor,
    arc_chord,
    decay_fit,
    max_curvature,
    self_intersects,
    sobolev_norm,
    strip_monitor,
    wiener_norm,
)
from .errors import (
    ConfigError,
    FitError,
    GeometryError,
    NumericError,
    ParameterError,
    PreconditionError,
    UsageError,
    WaveModelsError,
)
from .graph_models import (
    GraphState,
    WaveProfile,
    linear_mode_solution,
    rhs_internal,
    rhs_inviscid,
    rhs_odd,
    rhs_viscous,
    unidirectional_symbol,
)
from .params import ModelParams
from .spectral import (
    MultiplierSymbol,
    PeriodicGrid,
    SpectralField,
    apply_symbol,
    commutator,
    dealiased_product,
    deriv,
    hilbert,
    lam,
    make_grid,
    project_zero_mean,
)
from .timestep import IntegratorConfig, Trajectory, integrate, step_dp45, step_rk4

__version__ = "0.1.0"
