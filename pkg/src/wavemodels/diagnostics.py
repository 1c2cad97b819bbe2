"""Norms, theorem monitors and curve-geometry detectors.

Sobolev and Wiener-analytic norms, the shrinking-strip monitor for the
analytic local-existence theorem, arc-chord and self-intersection detectors
for curve runs, and exponential decay-rate fitting for norm series.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curve_models import CurveState, curvature
from .errors import FitError, NumericError, UsageError
from .spectral import SpectralField
from .timestep import Trajectory

_EXP_BUDGET = 700.0  # ln of the largest double

# coefficients below this are FFT rounding noise, not resolved signal
COEFF_NOISE_FLOOR = 1e-13


@dataclass
class NormSeries:
    times: np.ndarray
    values: np.ndarray
    label: str

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.times.shape != self.values.shape:
            raise UsageError("NormSeries times and values must have equal length")


@dataclass(frozen=True)
class StripMonitor:
    """Shrinking analyticity strip nu(t) = nu0 - shrink_rate * t."""

    nu0: float
    shrink_rate: float
    horizon: float

    @classmethod
    def for_initial_data(cls, f0: SpectralField) -> "StripMonitor":
        rate = 4.0 * wiener_norm(f0, 1.0, floor=COEFF_NOISE_FLOOR)
        horizon = np.inf if rate == 0.0 else 1.0 / rate
        return cls(nu0=1.0, shrink_rate=rate, horizon=horizon)

    def width_at(self, t: float) -> float:
        return self.nu0 - self.shrink_rate * t


def sobolev_norm(f: SpectralField, s: float = 1.0) -> float:
    """H^s norm: sqrt(sum_k (1+k^2)^s |fhat(k)|^2 * period)."""
    k = f.grid.wavenumbers
    weights = (1.0 + k ** 2) ** s
    return float(np.sqrt(f.grid.length * np.sum(weights * np.abs(f.spectrum) ** 2)))


def wiener_norm(f: SpectralField, nu: float = 0.0, floor: float = 0.0) -> float:
    """Analytic Wiener norm: sum_k e^(nu |k|) |fhat(k)| over resolved modes.

    ``floor`` excludes coefficients below a magnitude threshold.  The strip
    monitor needs this: FFT rounding leaves a ~1e-16 tail on every mode, and
    e^(nu |k|) amplifies that noise above the signal once nu*|k| is large.
    """
    k = np.abs(f.grid.wavenumbers)
    if nu * np.max(k) > _EXP_BUDGET:
        raise NumericError(
            f"wiener_norm overflow: nu*k_max = {nu * np.max(k):.3g} exceeds the "
            f"floating-point exponent budget ({_EXP_BUDGET:g})")
    mags = np.abs(f.spectrum)
    if floor > 0.0:
        mags = np.where(mags >= floor, mags, 0.0)
    return float(np.sum(np.exp(nu * k) * mags))


def spectral_tail(f: SpectralField) -> float:
    """Magnitude of the largest-|k| coefficient (resolution indicator)."""
    n = f.grid.n_nodes
    return float(abs(f.spectrum[n // 2]))


def strip_monitor(traj: Trajectory, f0: SpectralField, floor: float = COEFF_NOISE_FLOOR) -> NormSeries:
    """Wiener norm in the shrinking strip along a unidirectional-profile run.

    The trajectory states must be the raw profile values on f0's grid.  The
    series is truncated at the strip's horizon.  Coefficients below ``floor``
    are treated as unresolved (see ``wiener_norm``); the floor sits three
    orders of magnitude above the FFT rounding tail and one below the
    resolution threshold the monitor requires of the run.
    """
    if traj.states.shape[1] != f0.grid.n_nodes:
        raise UsageError("trajectory states do not match the grid of f0")
    monitor = StripMonitor.for_initial_data(f0)
    times, values = [], []
    for t, row in zip(traj.times, traj.states):
        if t >= monitor.horizon:
            break
        nu = monitor.width_at(t)
        values.append(wiener_norm(SpectralField(f0.grid, row), nu, floor=floor))
        times.append(t)
    return NormSeries(np.array(times), np.array(values), label="wiener-strip")


# ---------------------------------------------------------------------------
# curve geometry
# ---------------------------------------------------------------------------

def max_curvature(c: CurveState) -> float:
    return float(np.max(np.abs(curvature(c).values)))


def arc_chord(c: CurveState, block: int = 256) -> float:
    """Chord-arc blow-up detector.

    max over node pairs of (torus distance of the parameters) / (chord
    length); large values signal that distant parameters map to nearby
    points, i.e. approach to self-intersection.  Coincident nodes return inf.
    """
    alpha = c.grid.nodes
    length = c.grid.length
    z1, z2 = c.z1.values, c.z2.values
    n = c.grid.n_nodes
    worst = 0.0
    for lo in range(0, n, block):
        hi = min(lo + block, n)
        da = np.abs(alpha[lo:hi, None] - alpha[None, :])
        da = np.minimum(da, length - da)
        chord2 = (z1[lo:hi, None] - z1[None, :]) ** 2 + (z2[lo:hi, None] - z2[None, :]) ** 2
        np.fill_diagonal(da[:, lo:hi], 0.0)
        off_diag = da > 0
        if np.any(chord2[off_diag] < 1e-24):
            return float("inf")
        ratio = np.where(off_diag, da / np.sqrt(np.where(off_diag, chord2, 1.0)), 0.0)
        worst = max(worst, float(np.max(ratio)))
    return worst


def _proper_cross(p1x, p1y, p2x, p2y, q1x, q1y, q2x, q2y):
    """Vectorized strict segment-crossing predicate (orientation signs)."""
    rx, ry = p2x - p1x, p2y - p1y
    sx, sy = q2x - q1x, q2y - q1y
    d1 = sx * (p1y - q1y) - sy * (p1x - q1x)
    d2 = sx * (p2y - q1y) - sy * (p2x - q1x)
    d3 = rx * (q1y - p1y) - ry * (q1x - p1x)
    d4 = rx * (q2y - p1y) - ry * (q2x - p1x)
    return (d1 * d2 < 0) & (d3 * d4 < 0)


def self_intersects(c: CurveState) -> bool:
    """True iff two non-adjacent edges of the node polygon properly cross.

    Candidate pairs come from an x-interval overlap sweep, so the cost is
    near-linear for smooth curves; the predicate itself is the exact
    orientation-sign test (touching or collinear overlap does not count).
    """
    x, y = c.z1.values, c.z2.values
    n = x.size
    x2, y2 = np.roll(x, -1), np.roll(y, -1)
    xmin, xmax = np.minimum(x, x2), np.maximum(x, x2)
    ymin, ymax = np.minimum(y, y2), np.maximum(y, y2)

    order = np.argsort(xmin, kind="stable")
    xs = xmin[order]
    hi = np.searchsorted(xs, xmax[order], side="right")
    counts = hi - np.arange(n) - 1
    if np.any(counts > 0):
        a_idx = np.repeat(np.arange(n), counts)
        offsets = np.concatenate([np.arange(1, k + 1) for k in counts if k > 0]) if counts.sum() else np.array([], int)
        b_idx = a_idx + offsets
        i, j = order[a_idx], order[b_idx]
        # drop adjacent edges (shared endpoints) and keep y-overlapping pairs
        diff = (i - j) % n
        keep = (diff != 1) & (diff != n - 1) & (ymin[i] <= ymax[j]) & (ymin[j] <= ymax[i])
        i, j = i[keep], j[keep]
        if i.size and np.any(_proper_cross(x[i], y[i], x2[i], y2[i], x[j], y[j], x2[j], y2[j])):
            return True
    return False


def self_intersects_bruteforce(c: CurveState) -> bool:
    """All-pairs oracle for the sweep version (used by the invariant suite)."""
    x, y = c.z1.values, c.z2.values
    n = x.size
    x2, y2 = np.roll(x, -1), np.roll(y, -1)
    i, j = np.triu_indices(n, k=2)
    keep = ~((i == 0) & (j == n - 1))  # wrap-around adjacency
    i, j = i[keep], j[keep]
    return bool(np.any(_proper_cross(x[i], y[i], x2[i], y2[i], x[j], y[j], x2[j], y2[j])))


def decay_fit(series: NormSeries, window: tuple[float, float]) -> tuple[float, float]:
    """Least-squares exponential rate on a window: returns (rate, r_squared).

    Fits log(values) ~ rate * t + const for samples with t in [t_a, t_b].
    """
    t_a, t_b = window
    mask = (series.times >= t_a) & (series.times <= t_b)
    if np.count_nonzero(mask) < 2:
        raise FitError(f"decay_fit window [{t_a}, {t_b}] contains fewer than two samples")
    vals = series.values[mask]
    if np.any(vals <= 0):
        raise FitError("decay_fit requires strictly positive values on the window")
    t = series.times[mask]
    logv = np.log(vals)
    rate, intercept = np.polyfit(t, logv, 1)
    fitted = rate * t + intercept
    ss_res = float(np.sum((logv - fitted) ** 2))
    ss_tot = float(np.sum((logv - np.mean(logv)) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return float(rate), float(r2)
