"""Run orchestration: state packing, events, persistence, comparison.

A run directory contains

    resolved_config.yaml   the full configuration with defaults applied
    snapshots.txt          one row per sample time per node (17 significant digits)
    diagnostics.txt        one row per sample time per norm label, plus
                           trailing '# decay-rate ...' comment rows
    summary.yaml           stop reason, counters, wall time, exit code

Snapshot and diagnostics files are bit-reproducible for identical configs on
one platform; the summary contains wall time and is not.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, replace

import numpy as np
import yaml

from . import curve_models, graph_models
from .config import (
    RunConfig,
    dump_config,
    is_curve_model,
    parse_event,
    parse_norm_label,
    state_fields,
)
from .curve_models import CurveState
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
from .errors import ConfigError, FitError, GeometryError, NumericError, UsageError
from .spectral import PeriodicGrid, SpectralField, make_grid
from .timestep import Trajectory, integrate

OUTPUT_ENV_VAR = "WAVEMODELS_OUTPUT_DIR"

# Fourier coefficients below this are treated as roundoff in curve runs.
# The vorticity equation ends in d/dalpha, which amplifies the bracket's
# pointwise rounding (~1e-16 * field scale) by k_max ~ n/3, so the floor must
# sit above n * eps * scale (~1e-12 for the bubble/drop scenarios).
KRASNY_THRESHOLD = 1e-11

EXIT_OK = 0
EXIT_EVENT = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_INVARIANT = 4


def field_from_modes(grid: PeriodicGrid, modes) -> SpectralField:
    """Sum of a_cos*cos(kx) + a_sin*sin(kx) over a (k, a_cos, a_sin) list."""
    values = np.zeros(grid.n_nodes)
    for k, a_cos, a_sin in modes:
        values += a_cos * np.cos(k * grid.nodes) + a_sin * np.sin(k * grid.nodes)
    return SpectralField(grid, values)


_GRAPH_BI_RHS = {
    "viscous-bi": lambda st, p: graph_models.rhs_viscous(st, p, "bidirectional"),
    "odd-bi": lambda st, p: graph_models.rhs_odd(st, p, "bidirectional"),
    "inviscid-bi": lambda st, p: graph_models.rhs_inviscid(st, p, "bidirectional"),
    "internal-bi": lambda st, p: graph_models.rhs_internal(st, p, "bidirectional"),
}

_UNI_RHS = {
    "viscous-uni": lambda st, p: graph_models.rhs_viscous(st, p, "unidirectional"),
    "viscous-uni-full": lambda st, p: graph_models.rhs_viscous(st, p, "unidirectional_full"),
    "odd-uni": lambda st, p: graph_models.rhs_odd(st, p, "unidirectional"),
    "inviscid-uni": lambda st, p: graph_models.rhs_inviscid(st, p, "unidirectional"),
    "internal-uni": lambda st, p: graph_models.rhs_internal(st, p, "unidirectional"),
}


class ModelSetup:
    """Packs model state into flat vectors and exposes the rhs callable."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.grid = make_grid(config.n_nodes)
        self.model = config.model
        self.fields = state_fields(self.model)
        self.snapshot_fields = tuple(self.fields)
        self.params = config.params
        self.frozen_strength = None
        n = self.grid.n_nodes

        initial = {name: field_from_modes(self.grid, modes)
                   for name, modes in config.initial.items()}
        if self.model in ("kh", "kh-refined", "br-reference"):
            self.frozen_strength = initial["vorticity"]
            self.snapshot_fields = ("z1", "z2", "vorticity")
        self.y0 = np.concatenate([initial[name].values for name in self.fields])
        self.n = n

    # -- packing -----------------------------------------------------------

    def unpack(self, y: np.ndarray) -> dict:
        n = self.n
        out = {name: SpectralField(self.grid, y[i * n:(i + 1) * n])
               for i, name in enumerate(self.fields)}
        if self.frozen_strength is not None:
            out["vorticity"] = self.frozen_strength
        return out

    def curve_state(self, y: np.ndarray) -> CurveState:
        fields = self.unpack(y)
        return CurveState(fields["z1"], fields["z2"], fields["vorticity"])

    def primary_field(self, fields: dict) -> SpectralField:
        return fields["f"] if "f" in fields else fields["h"]

    # -- right-hand side ----------------------------------------------------

    def project_band(self, values: np.ndarray) -> np.ndarray:
        """Project onto the dealiased band.

        Time-stepped graph dynamics are restricted to resolved modes: modes
        above the 2/3 cutoff carry only FFT rounding noise, and advancing
        them explicitly parks that noise at the stability boundary where it
        grows to the tolerance level.
        """
        spec = np.fft.fft(values)
        return np.fft.ifft(np.where(self.grid.dealias_keep, spec, 0.0)).real

    def krasny_filter(self, values: np.ndarray) -> np.ndarray:
        """Zero Fourier coefficients below the roundoff threshold.

        The sheet equations amplify short waves at a rate proportional to
        k |H vorticity|, so unfiltered FFT noise at the band edge reaches
        macroscopic amplitude long before the physical structures do.
        Filtering both the state seen by the rhs and the returned derivative
        keeps sub-threshold modes from ever accumulating; genuinely resolved
        content crosses the threshold only when the physical spectral front
        arrives.
        """
        n = self.grid.n_nodes
        spec = np.fft.fft(values) / n
        spec[np.abs(spec) < KRASNY_THRESHOLD] = 0.0
        return np.fft.ifft(spec * n).real

    def rhs(self, t: float, y: np.ndarray) -> np.ndarray:
        if not np.all(np.isfinite(y)):
            raise NumericError("state became non-finite")
        model, p = self.model, self.params
        try:
            if model in _GRAPH_BI_RHS:
                fields = self.unpack(y)
                d = _GRAPH_BI_RHS[model](graph_models.GraphState(fields["h"], fields["v"]), p)
                return np.concatenate([self.project_band(d.h.values),
                                       self.project_band(d.v.values)])
            if model in _UNI_RHS:
                fields = self.unpack(y)
                d = _UNI_RHS[model](graph_models.WaveProfile(fields["f"]), p)
                return self.project_band(d.f.values)
            if model == "internal-sys":
                fields = self.unpack(y)
                h_t, w_t = graph_models.rhs_internal((fields["h"], fields["vorticity"]), p,
                                                     "first_order_system")
                return np.concatenate([self.project_band(h_t.values),
                                       self.project_band(w_t.values)])
            n = self.n
            filtered = np.concatenate([self.krasny_filter(y[i * n:(i + 1) * n])
                                       for i in range(len(self.fields))])
            c = self.curve_state(filtered)
            if model == "zmodel":
                u1, u2, w_t = curve_models.zmodel_rhs(c, p)
                parts = [u1.values, u2.values, w_t.values]
            else:
                if model == "kh":
                    u1, u2 = curve_models.kh_rhs(c, self.frozen_strength)
                elif model == "kh-refined":
                    u1, u2 = curve_models.refined_kh_rhs(c, self.frozen_strength)
                else:  # br-reference
                    u1, u2 = curve_models.br_velocity(c, self.frozen_strength)
                parts = [u1.values, u2.values]
            return np.concatenate([self.krasny_filter(part) for part in parts])
        except GeometryError as exc:
            # a degenerating curve behaves like any other blow-up for the
            # integrator: reject the step, shrink dt
            raise NumericError(str(exc)) from exc

    # -- events --------------------------------------------------------------

    def event_predicates(self):
        events = []
        for text in self.config.events:
            name, kind, threshold = parse_event(text)
            if kind == "max-curvature":
                fn = lambda t, y, thr=threshold: max_curvature(self.curve_state(y)) > thr
            elif kind == "arc-chord":
                fn = lambda t, y, thr=threshold: arc_chord(self.curve_state(y)) > thr
            else:
                fn = lambda t, y: self_intersects(self.curve_state(y))
            events.append((name, fn))
        return events


# ---------------------------------------------------------------------------
# diagnostics evaluation
# ---------------------------------------------------------------------------

def compute_diagnostics(setup: ModelSetup, traj: Trajectory) -> list[NormSeries]:
    """Evaluate every configured label along the sampled trajectory."""
    series = []
    labels = setup.config.diagnostics
    if not labels:
        return series
    unpacked = [setup.unpack(row) for row in traj.states]
    for label in labels:
        kind, param = parse_norm_label(label)
        if kind == "wiener-strip":
            f0 = setup.primary_field(unpacked[0])
            series.append(strip_monitor(traj, f0))
            continue
        values = []
        for fields in unpacked:
            if kind == "h1":
                values.append(sobolev_norm(setup.primary_field(fields), 1.0))
            elif kind == "hs":
                values.append(sobolev_norm(setup.primary_field(fields), param))
            elif kind == "wiener":
                values.append(wiener_norm(setup.primary_field(fields), param))
            else:
                c = CurveState(fields["z1"], fields["z2"], fields["vorticity"])
                if kind == "arc-chord":
                    values.append(arc_chord(c))
                elif kind == "max-curvature":
                    values.append(max_curvature(c))
                else:
                    values.append(1.0 if self_intersects(c) else 0.0)
        series.append(NormSeries(traj.times, np.array(values), label=label))
    return series


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_snapshots(path: str, setup: ModelSetup, traj: Trajectory):
    coord = "alpha" if is_curve_model(setup.model) else "x"
    names = setup.snapshot_fields
    nodes = setup.grid.nodes
    with open(path, "w") as fh:
        fh.write("# t " + coord + " " + " ".join(names) + "\n")
        for t, row in zip(traj.times, traj.states):
            fields = setup.unpack(row)
            cols = [fields[name].values for name in names]
            ts = _fmt(t)
            for j in range(nodes.size):
                fh.write(ts + " " + _fmt(nodes[j]) + " "
                         + " ".join(_fmt(col[j]) for col in cols) + "\n")


def write_diagnostics(path: str, series_list: list[NormSeries]):
    with open(path, "w") as fh:
        fh.write("# t label value\n")
        for series in series_list:
            for t, v in zip(series.times, series.values):
                fh.write(f"{_fmt(t)} {series.label} {_fmt(v)}\n")
        for series in series_list:
            if series.label == "self-intersect" or len(series.times) < 2:
                continue
            window = (float(series.times[0]), float(series.times[-1]))
            try:
                rate, r2 = decay_fit(series, window)
            except FitError:
                continue
            fh.write(f"# decay-rate {series.label} {_fmt(rate)} r2 {_fmt(r2)} "
                     f"window {_fmt(window[0])} {_fmt(window[1])}\n")


@dataclass
class RunResult:
    path: str
    config: RunConfig
    trajectory: Trajectory | None
    exit_code: int
    stop_reason: str
    event_name: str | None = None
    error: str | None = None
    wall_time: float = 0.0


def _resolve_output_dir(config: RunConfig, root: str | None) -> str:
    if config.output_dir:
        return config.output_dir
    base = root or os.environ.get(OUTPUT_ENV_VAR) or "runs"
    return os.path.join(base, config.run_name())


def run(config: RunConfig, root: str | None = None, force: bool = False) -> RunResult:
    """Execute one configured run and persist its artifacts.

    Exit codes: 0 clean finish, 1 stopped by a declared event, 3 numeric
    failure (dt underflow, step budget, non-finite states).
    """
    out_dir = _resolve_output_dir(config, root)
    marker = os.path.join(out_dir, "resolved_config.yaml")
    if os.path.exists(marker) and not force:
        raise ConfigError(f"output_dir: {out_dir} already holds a run (use force to overwrite)")
    os.makedirs(out_dir, exist_ok=True)

    setup = ModelSetup(config)
    with open(marker, "w") as fh:
        fh.write(dump_config(config))

    t_start = time.perf_counter()
    error = None
    traj = None
    try:
        traj = integrate(setup.rhs, setup.y0, 0.0, config.t_max, config.integrator,
                         events=setup.event_predicates(), sample_every=config.sample_every)
        stop_reason = traj.stop_reason
        event_name = traj.event_name
    except NumericError as exc:
        stop_reason, event_name, error = "numeric_error", None, str(exc)
    wall = time.perf_counter() - t_start

    if traj is not None:
        write_snapshots(os.path.join(out_dir, "snapshots.txt"), setup, traj)
        write_diagnostics(os.path.join(out_dir, "diagnostics.txt"),
                          compute_diagnostics(setup, traj))

    if stop_reason == "reached_tmax":
        exit_code = EXIT_OK
    elif stop_reason.startswith("event"):
        exit_code = EXIT_EVENT
    else:
        exit_code = EXIT_NUMERIC

    summary = {
        "model": config.model,
        "name": config.run_name(),
        "stop_reason": stop_reason,
        "event_name": event_name,
        "t_final": float(traj.t_final) if traj is not None else 0.0,
        "n_accepted": traj.n_accepted if traj is not None else 0,
        "n_rejected": traj.n_rejected if traj is not None else 0,
        "n_rhs": traj.n_rhs if traj is not None else 0,
        "wall_time_s": wall,
        "exit_code": exit_code,
        "error": error,
    }
    with open(os.path.join(out_dir, "summary.yaml"), "w") as fh:
        fh.write(yaml.safe_dump(summary, sort_keys=True))

    return RunResult(path=out_dir, config=config, trajectory=traj, exit_code=exit_code,
                     stop_reason=stop_reason, event_name=event_name, error=error,
                     wall_time=wall)


# ---------------------------------------------------------------------------
# model comparison
# ---------------------------------------------------------------------------

def compare(configs: list[RunConfig], output_dir: str, force: bool = False):
    """Run several h-bearing graph models from shared initial data and write a
    table of pairwise sup-norm differences of h at each sample time."""
    if not configs:
        raise UsageError("compare needs at least one config")
    for cfg in configs:
        if is_curve_model(cfg.model):
            raise UsageError("compare is defined for graph models; curve models have an "
                             "incompatible state space")
        if "h" not in state_fields(cfg.model):
            raise UsageError(f"compare needs models that evolve an elevation h; "
                             f"{cfg.model!r} does not")
    first = configs[0]
    for cfg in configs[1:]:
        if cfg.n_nodes != first.n_nodes:
            raise UsageError("compare requires a shared grid")
        if cfg.initial.get("h") != first.initial.get("h"):
            raise UsageError("compare requires shared initial elevation")
        if cfg.t_max != first.t_max or cfg.sample_every != first.sample_every:
            raise UsageError("compare requires shared t_max and sample_every")

    os.makedirs(output_dir, exist_ok=True)
    results = []
    names = []
    for idx, cfg in enumerate(configs):
        name = cfg.run_name()
        if name in names:
            name = f"{name}-{idx}"
        names.append(name)
        sub = replace(cfg, name=name, output_dir=os.path.join(output_dir, name))
        results.append(run(sub, force=force))

    n_common = min(len(r.trajectory.times) for r in results)
    times = results[0].trajectory.times[:n_common]
    n = first.n_nodes
    h_of = [r.trajectory.states[:n_common, :n] for r in results]

    pairs = [(i, j) for i in range(len(results)) for j in range(i + 1, len(results))]
    if not pairs:
        pairs = [(0, 0)]  # degenerate single-config table of zeros
    table_path = os.path.join(output_dir, "comparison.txt")
    with open(table_path, "w") as fh:
        fh.write("# t " + " ".join(f"{names[i]}|{names[j]}" for i, j in pairs) + "\n")
        for row, t in enumerate(times):
            diffs = [np.max(np.abs(h_of[i][row] - h_of[j][row])) for i, j in pairs]
            fh.write(_fmt(t) + " " + " ".join(_fmt(d) for d in diffs) + "\n")
    return table_path, results
