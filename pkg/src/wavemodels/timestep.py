"""Explicit time integration over flat state vectors.

``integrate`` is an adaptive Dormand-Prince 5(4) embedded pair (the standard
"RK45") with a basic step controller, linear-interpolation sampling and
event-based stopping.  ``step_rk4`` is the classical fixed-step scheme kept
for convergence studies.  Both are deterministic: identical inputs give
bit-identical trajectories on one platform.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, NumericError

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# b5 - b4, used for the embedded error estimate
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])

MIN_FACTOR = 0.2
MAX_FACTOR = 5.0


@dataclass
class IntegratorConfig:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-8
    dt_initial: float = 1e-3
    dt_min: float = 1e-12
    dt_max: float = np.inf
    safety: float = 0.9
    max_steps: int = 1_000_000

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "dt_initial", "dt_min", "dt_max", "safety"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"integrator {name} must be positive")
        if not self.dt_min <= self.dt_initial <= self.dt_max:
            raise ConfigError("need dt_min <= dt_initial <= dt_max")
        if not 0 < self.safety < 1:
            raise ConfigError("safety factor must lie in (0, 1)")
        if self.max_steps <= 0:
            raise ConfigError("max_steps must be positive")


@dataclass
class Trajectory:
    """Sampled solution: one state row per time, plus why integration stopped."""

    times: np.ndarray
    states: np.ndarray
    stop_reason: str          # reached_tmax | event(<name>) | dt_underflow | max_steps
    event_name: str | None = None
    t_final: float = 0.0
    n_accepted: int = 0
    n_rejected: int = 0
    n_rhs: int = 0

    def state_at(self, t: float) -> np.ndarray:
        i = int(np.argmin(np.abs(self.times - t)))
        return self.states[i]


def _dp45_stages(rhs, y: np.ndarray, t: float, dt: float, k1: np.ndarray):
    """Stages 2..7 of a Dormand-Prince step given the first stage.

    Returns (y_next_order5, error_estimate, last_stage).  The scheme is FSAL:
    the last stage evaluates the rhs at the accepted point, so it seeds the
    next step's first stage for free.
    """
    k = np.empty((7, y.size))
    k[0] = k1
    for i in range(1, 7):
        k[i] = rhs(t + _C[i] * dt, y + dt * (_A[i] @ k[:i]))
    y5 = y + dt * (_B5 @ k)
    err = dt * (_E @ k)
    return y5, err, k[6]


def step_dp45(rhs, y: np.ndarray, t: float, dt: float):
    """One Dormand-Prince step: returns (y_next_order5, error_estimate)."""
    y5, err, _ = _dp45_stages(rhs, y, t, dt, np.asarray(rhs(t, y)))
    return y5, err


def step_rk4(rhs, y: np.ndarray, t: float, dt: float) -> np.ndarray:
    """Classical fourth-order Runge-Kutta step."""
    if dt <= 0:
        raise ConfigError("step_rk4 requires dt > 0")
    k1 = np.asarray(rhs(t, y))
    k2 = np.asarray(rhs(t + 0.5 * dt, y + 0.5 * dt * k1))
    k3 = np.asarray(rhs(t + 0.5 * dt, y + 0.5 * dt * k2))
    k4 = np.asarray(rhs(t + dt, y + dt * k3))
    y_next = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(y_next)):
        raise NumericError("step_rk4 produced a non-finite state")
    return y_next


def _error_norm(err: np.ndarray, y_old: np.ndarray, y_new: np.ndarray, cfg: IntegratorConfig) -> float:
    scale = cfg.abs_tol + cfg.rel_tol * np.maximum(np.abs(y_old), np.abs(y_new))
    return float(np.sqrt(np.mean((err / scale) ** 2)))


def integrate(rhs, y0, t0: float, t1: float, cfg: IntegratorConfig | None = None,
              events=(), sample_every: float | None = None) -> Trajectory:
    """Integrate y' = rhs(t, y) from t0 to t1 with adaptive RK45.

    Parameters
    ----------
    rhs : callable (t, y) -> dy; must be pure.
    events : sequence of (name, predicate) pairs; predicates take (t, y) and
        are evaluated after every accepted step.  The first one that fires
        stops the run and its name is recorded.
    sample_every : emit snapshots at t0 + j*sample_every by linear
        interpolation between accepted steps; None records every accepted
        step.  The final time (stop time) is always included.

    A step is accepted when the weighted rms error (abs_tol/rel_tol mixed) is
    <= 1; the step size update is dt * clip(safety*err^(-1/5), 0.2, 5).  Steps
    whose stages blow up to non-finite values are rejected and retried with
    dt/2.  If dt falls below dt_min the partial trajectory is returned with
    stop_reason="dt_underflow" instead of raising.
    """
    if cfg is None:
        cfg = IntegratorConfig()
    y = np.array(y0, dtype=float).ravel()
    if not np.all(np.isfinite(y)):
        raise NumericError("initial state contains non-finite values")
    if not t1 > t0:
        raise ConfigError("need t1 > t0")
    if sample_every is not None and sample_every <= 0:
        raise ConfigError("sample_every must be positive")

    times = [t0]
    states = [y.copy()]
    t = t0
    dt = min(cfg.dt_initial, cfg.dt_max, t1 - t0)
    next_sample = 1  # index j of the next t0 + j*sample_every to emit
    n_acc = n_rej = n_rhs = 0
    stop_reason = "max_steps"
    event_name = None

    def record(ts, ys):
        times.append(ts)
        states.append(ys)

    def emit_samples(t_prev, y_prev, t_new, y_new):
        # linear interpolation at every sample multiple crossed by this step
        nonlocal next_sample
        if sample_every is None:
            record(t_new, y_new.copy())
            return
        while t0 + next_sample * sample_every <= t_new + 1e-14 * max(1.0, abs(t_new)):
            ts = t0 + next_sample * sample_every
            theta = (ts - t_prev) / (t_new - t_prev)
            record(ts, (1.0 - theta) * y_prev + theta * y_new)
            next_sample += 1

    k_first = None  # FSAL: last stage of an accepted step seeds the next one
    for _ in range(cfg.max_steps):
        clamped = False
        if t + dt >= t1:
            dt = t1 - t
            clamped = True
        try:
            if k_first is None:
                k_first = np.asarray(rhs(t, y))
                n_rhs += 1
            y_new, err_vec, k_last = _dp45_stages(rhs, y, t, dt, k_first)
            n_rhs += 6
            if np.all(np.isfinite(y_new)) and np.all(np.isfinite(err_vec)):
                err = _error_norm(err_vec, y, y_new, cfg)
            else:
                err = np.inf
        except (NumericError, FloatingPointError):
            err = np.inf
            y_new = None
        if err > 1.0:
            n_rej += 1
            if np.isfinite(err):
                dt *= max(MIN_FACTOR, cfg.safety * err ** -0.2)
            else:
                dt *= 0.5  # stage blow-up: back off hard
            if dt < cfg.dt_min:
                stop_reason = "dt_underflow"
                break
            continue

        t_new = t1 if clamped else t + dt
        emit_samples(t, y, t_new, y_new)
        n_acc += 1
        k_first = k_last

        fired = None
        for name, predicate in events:
            if predicate(t_new, y_new):
                fired = name
                break
        if fired is not None:
            if times[-1] != t_new:
                record(t_new, y_new.copy())
            t, y = t_new, y_new
            stop_reason, event_name = f"event({fired})", fired
            break

        t, y = t_new, y_new
        if t >= t1:
            if times[-1] != t1:
                record(t1, y.copy())
            stop_reason = "reached_tmax"
            break

        factor = MAX_FACTOR if err == 0.0 else min(MAX_FACTOR, max(MIN_FACTOR, cfg.safety * err ** -0.2))
        dt = min(dt * factor, cfg.dt_max)
        if dt < cfg.dt_min:
            stop_reason = "dt_underflow"
            break

    if stop_reason in ("dt_underflow", "max_steps") and times[-1] != t:
        record(t, y.copy())

    return Trajectory(
        times=np.array(times),
        states=np.array(states),
        stop_reason=stop_reason,
        event_name=event_name,
        t_final=t,
        n_accepted=n_acc,
        n_rejected=n_rej,
        n_rhs=n_rhs,
    )
