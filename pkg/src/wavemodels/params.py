"""Physical and dimensionless constants shared by the graph and curve models."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

# defaults for the inviscid surface-wave baseline; scenarios override
DEFAULT_EPSILON = 0.1
DEFAULT_ATWOOD = -1.0
DEFAULT_GRAVITY = 9.8


@dataclass(frozen=True)
class ModelParams:
    """Immutable parameter record.

    epsilon, beta, alpha1, alpha2, alpha are the dimensionless steepness,
    surface-tension and viscosity knobs of the graph models; atwood, gravity,
    surface_tension and the densities drive the curve and internal-wave
    models.  Densities are optional; when both are given they must reproduce
    the Atwood number, and when absent they default to ``1 +- atwood`` (sum 2)
    wherever a density sum is actually needed.
    """

    epsilon: float = DEFAULT_EPSILON
    beta: float = 0.0
    alpha1: float = 0.0
    alpha2: float = 0.0
    alpha: float = 0.0
    atwood: float = DEFAULT_ATWOOD
    gravity: float = DEFAULT_GRAVITY
    surface_tension: float = 0.0
    rho_plus: float | None = None
    rho_minus: float | None = None

    def __post_init__(self):
        for name in ("epsilon", "beta", "alpha1", "alpha2", "alpha", "gravity", "surface_tension"):
            val = getattr(self, name)
            if not np.isfinite(val) or val < 0:
                raise ParameterError(f"{name} must be finite and >= 0, got {val!r}")
        if not np.isfinite(self.atwood) or abs(self.atwood) > 1:
            raise ParameterError(f"atwood must lie in [-1, 1], got {self.atwood!r}")
        if (self.rho_plus is None) != (self.rho_minus is None):
            raise ParameterError("rho_plus and rho_minus must be supplied together")
        if self.rho_plus is not None:
            if self.rho_plus < 0 or self.rho_minus < 0 or not np.isfinite(self.rho_plus + self.rho_minus):
                raise ParameterError("densities must be finite and >= 0")
            total = self.rho_plus + self.rho_minus
            if total <= 0:
                raise ParameterError("rho_plus + rho_minus must be positive")
            implied = (self.rho_plus - self.rho_minus) / total
            if abs(implied - self.atwood) > 1e-10:
                raise ParameterError(
                    f"densities imply atwood={implied!r}, inconsistent with atwood={self.atwood!r}")

    @property
    def density_sum(self) -> float:
        """rho_plus + rho_minus, falling back to the normalized pair 1 +- A."""
        if self.rho_plus is not None:
            return self.rho_plus + self.rho_minus
        return 2.0
