"""Run configuration: schema, parsing, validation and the resolved echo.

Configs are YAML documents (nested key-value text).  ``parse_config`` applies
every documented default and rejects unknown keys with their full key path;
``resolved_dict``/``dump_config`` produce an echo that parses back to the
identical configuration (config fixed point).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import yaml

from .errors import ConfigError
from .graph_models import GRAPH_MODEL_IDS
from .curve_models import CURVE_MODEL_IDS
from .params import ModelParams
from .timestep import IntegratorConfig

MODEL_IDS = GRAPH_MODEL_IDS + CURVE_MODEL_IDS

BIDIRECTIONAL_IDS = ("viscous-bi", "odd-bi", "inviscid-bi", "internal-bi")
UNIDIRECTIONAL_IDS = ("viscous-uni", "viscous-uni-full", "odd-uni", "inviscid-uni", "internal-uni")

_PARAM_KEYS = ("epsilon", "beta", "alpha1", "alpha2", "alpha", "atwood",
               "gravity", "surface_tension", "rho_plus", "rho_minus")
_INTEGRATOR_KEYS = ("rel_tol", "abs_tol", "dt_initial", "dt_min", "dt_max", "safety", "max_steps")

_NORM_LABEL_RE = re.compile(r"^(h1|wiener-strip|arc-chord|max-curvature|self-intersect"
                            r"|hs\((-?[0-9.eE+]+)\)|wiener\(([0-9.eE+-]+)\))$")
_EVENT_RE = re.compile(r"^(max-curvature|arc-chord)\s*>\s*([0-9.eE+-]+)$")

# initial-data presets (mode lists are (k, cosine amplitude, sine amplitude))
GRAPH2_AMPLITUDE = 0.1 * (2.0 / 5.0) * 0.25
INITIAL_PRESETS = {
    "circle": {"z1": [[1, 1.0, 0.0]], "z2": [[1, 0.0, 1.0]], "vorticity": []},
    "graph-1": {"h": [[1, 0.0, 1.0 / 3.0]], "v": []},
    "graph-2": {"h": [[5, 0.0, GRAPH2_AMPLITUDE], [8, 0.0, GRAPH2_AMPLITUDE * 0.1]], "v": []},
}


def state_fields(model: str) -> tuple[str, ...]:
    """Names of the evolving fields of a model, in state-vector order."""
    if model in BIDIRECTIONAL_IDS:
        return ("h", "v")
    if model in UNIDIRECTIONAL_IDS:
        return ("f",)
    if model == "internal-sys":
        return ("h", "vorticity")
    if model == "zmodel":
        return ("z1", "z2", "vorticity")
    if model in ("kh", "kh-refined", "br-reference"):
        return ("z1", "z2")
    raise ConfigError(f"unknown model id {model!r}")


def is_curve_model(model: str) -> bool:
    return model in CURVE_MODEL_IDS


@dataclass
class RunConfig:
    model: str
    t_max: float
    n_nodes: int = 256
    sample_every: float | None = None
    name: str | None = None
    output_dir: str | None = None
    seed: int = 0
    params: ModelParams = field(default_factory=ModelParams)
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    initial: dict = field(default_factory=dict)   # canonical field -> mode list
    diagnostics: list = field(default_factory=list)
    events: list = field(default_factory=list)

    def run_name(self) -> str:
        return self.name or self.model


def _fail(path: str, msg: str):
    raise ConfigError(f"{path}: {msg}")


def _expect_mapping(obj, path: str) -> dict:
    if not isinstance(obj, dict):
        _fail(path, f"expected a mapping, got {type(obj).__name__}")
    return obj


def _reject_unknown(d: dict, allowed, path: str):
    unknown = sorted(set(d) - set(allowed))
    if unknown:
        _fail(f"{path}.{unknown[0]}" if path else unknown[0], "unknown key")


def _as_float(val, path: str) -> float:
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        _fail(path, f"expected a number, got {val!r}")
    return float(val)


def _as_int(val, path: str) -> int:
    if isinstance(val, bool) or not isinstance(val, int):
        _fail(path, f"expected an integer, got {val!r}")
    return int(val)


def _parse_modes(obj, path: str) -> list:
    if obj is None:
        return []
    if not isinstance(obj, list):
        _fail(path, "expected a list of (k, cos_amplitude, sin_amplitude) triples")
    modes = []
    for idx, entry in enumerate(obj):
        p = f"{path}[{idx}]"
        if not isinstance(entry, (list, tuple)) or len(entry) != 3:
            _fail(p, f"expected a (k, cos_amplitude, sin_amplitude) triple, got {entry!r}")
        k = _as_int(entry[0], f"{p}.k")
        if k < 1:
            _fail(f"{p}.k", "mode number must be >= 1")
        modes.append([k, _as_float(entry[1], f"{p}.cos"), _as_float(entry[2], f"{p}.sin")])
    return modes


def _parse_initial(obj, model: str, path: str = "initial") -> dict:
    names = state_fields(model)
    allowed = set(names)
    if model in ("kh", "kh-refined", "br-reference"):
        allowed.add("vorticity")  # the frozen sheet strength
    if isinstance(obj, str):
        obj = {"preset": obj}
    mapping = _expect_mapping(obj, path)
    _reject_unknown(mapping, allowed | {"preset", "scale"}, path)

    scale = _as_float(mapping.get("scale", 1.0), f"{path}.scale")
    modes: dict[str, list] = {}
    if "preset" in mapping:
        preset_name = mapping["preset"]
        if preset_name not in INITIAL_PRESETS:
            _fail(f"{path}.preset", f"unknown initial-data preset {preset_name!r}; "
                                    f"known: {sorted(INITIAL_PRESETS)}")
        preset = INITIAL_PRESETS[preset_name]
        compatible = set(preset) <= (allowed | {"v", "vorticity"})
        if not compatible or not (set(preset) & allowed):
            _fail(f"{path}.preset", f"initial preset {preset_name!r} does not fit model {model!r}")
        for fname, fmodes in preset.items():
            if fname in allowed:
                modes[fname] = [list(m) for m in fmodes]
            elif fname == "v" and model == "internal-sys" and not fmodes:
                # h_t = (1/2) H vorticity, so resting graph data means a
                # quiescent sheet
                modes["vorticity"] = []
    for fname in sorted(set(mapping) - {"preset", "scale"}):
        modes[fname] = _parse_modes(mapping[fname], f"{path}.{fname}")

    missing = [nm for nm in names if nm not in modes]
    if model in ("kh", "kh-refined", "br-reference") and "vorticity" not in modes:
        missing.append("vorticity")
    if missing:
        _fail(path, f"model {model!r} needs initial data for {missing}")
    if scale != 1.0:
        modes = {nm: [[k, c * scale, s * scale] for k, c, s in ms] for nm, ms in modes.items()}
    return modes


def _parse_params(obj, path: str = "params") -> ModelParams:
    mapping = _expect_mapping(obj or {}, path)
    _reject_unknown(mapping, _PARAM_KEYS, path)
    kwargs = {}
    for key, val in mapping.items():
        if key in ("rho_plus", "rho_minus") and val is None:
            kwargs[key] = None
        else:
            kwargs[key] = _as_float(val, f"{path}.{key}")
    try:
        return ModelParams(**kwargs)
    except Exception as exc:
        _fail(path, str(exc))


def _parse_integrator(obj, path: str = "integrator") -> IntegratorConfig:
    mapping = _expect_mapping(obj or {}, path)
    _reject_unknown(mapping, _INTEGRATOR_KEYS, path)
    kwargs = {}
    for key, val in mapping.items():
        kwargs[key] = _as_int(val, f"{path}.{key}") if key == "max_steps" else _as_float(val, f"{path}.{key}")
    try:
        return IntegratorConfig(**kwargs)
    except Exception as exc:
        _fail(path, str(exc))


def parse_norm_label(label: str):
    """Split a diagnostics label into (kind, parameter or None)."""
    m = _NORM_LABEL_RE.match(label)
    if not m:
        raise ConfigError(f"unknown diagnostics label {label!r}; expected h1, hs(s), "
                          "wiener(nu), wiener-strip, arc-chord, max-curvature or self-intersect")
    if m.group(2) is not None:
        s = float(m.group(2))
        if s < 0:
            raise ConfigError(f"{label}: Sobolev order must be >= 0")
        return "hs", s
    if m.group(3) is not None:
        nu = float(m.group(3))
        if nu < 0:
            raise ConfigError(f"{label}: strip width must be >= 0")
        return "wiener", nu
    return label, None


def parse_event(text: str):
    """Parse an event spec into (name, kind, threshold)."""
    if text == "self-intersect":
        return (text, "self-intersect", None)
    m = _EVENT_RE.match(text)
    if not m:
        raise ConfigError(f"unknown event {text!r}; expected 'max-curvature > X', "
                          "'arc-chord > X' or 'self-intersect'")
    return (text, m.group(1), float(m.group(2)))


_TOP_KEYS = ("model", "n_nodes", "t_max", "sample_every", "name", "output_dir",
             "seed", "params", "integrator", "initial", "diagnostics", "events", "preset")

_CURVE_LABELS = {"arc-chord", "max-curvature", "self-intersect"}


def _validate_labels(config: RunConfig):
    curve = is_curve_model(config.model)
    for label in config.diagnostics:
        kind, _ = parse_norm_label(label)
        if curve and kind not in _CURVE_LABELS:
            raise ConfigError(f"diagnostics.{label}: norm labels do not apply to curve model {config.model!r}")
        if not curve and kind in _CURVE_LABELS:
            raise ConfigError(f"diagnostics.{label}: curve labels do not apply to model {config.model!r}")
        if kind == "wiener-strip" and config.model not in UNIDIRECTIONAL_IDS:
            raise ConfigError(f"diagnostics.{label}: the strip monitor needs a unidirectional run")
    for text in config.events:
        parse_event(text)
        if not curve:
            raise ConfigError(f"events.{text}: stop events are defined for curve models only")


def build_config(doc: dict) -> RunConfig:
    """Validate a parsed YAML mapping and materialize all defaults."""
    doc = _expect_mapping(doc, "config")
    if "preset" in doc:
        from .presets import scenario_preset  # deferred: presets are built from configs
        base = scenario_preset(doc["preset"]).config
        overrides = {k: v for k, v in doc.items() if k != "preset"}
        merged = resolved_dict(base)
        for key, val in overrides.items():
            if isinstance(val, dict) and isinstance(merged.get(key), dict):
                merged[key].update(val)
            else:
                merged[key] = val
        return build_config(merged)

    _reject_unknown(doc, _TOP_KEYS, "")
    for key in ("model", "t_max", "initial"):
        if key not in doc:
            _fail(key, "required key is missing")
    model = doc["model"]
    if model not in MODEL_IDS:
        _fail("model", f"unknown model id {model!r}; known ids: {', '.join(MODEL_IDS)}")
    t_max = _as_float(doc["t_max"], "t_max")
    if t_max <= 0:
        _fail("t_max", "must be positive")
    n_nodes = _as_int(doc.get("n_nodes", 256), "n_nodes")
    sample_every = doc.get("sample_every")
    if sample_every is not None:
        sample_every = _as_float(sample_every, "sample_every")
        if sample_every <= 0:
            _fail("sample_every", "must be positive")
    else:
        sample_every = t_max / 100.0
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        _fail("name", f"expected a string, got {name!r}")
    output_dir = doc.get("output_dir")
    if output_dir is not None and not isinstance(output_dir, str):
        _fail("output_dir", f"expected a string, got {output_dir!r}")
    seed = _as_int(doc.get("seed", 0), "seed")

    diagnostics = doc.get("diagnostics") or []
    if not isinstance(diagnostics, list) or not all(isinstance(s, str) for s in diagnostics):
        _fail("diagnostics", "expected a list of label strings")
    events = doc.get("events") or []
    if not isinstance(events, list) or not all(isinstance(s, str) for s in events):
        _fail("events", "expected a list of event strings")

    config = RunConfig(
        model=model,
        t_max=t_max,
        n_nodes=n_nodes,
        sample_every=sample_every,
        name=name,
        output_dir=output_dir,
        seed=seed,
        params=_parse_params(doc.get("params"), "params"),
        integrator=_parse_integrator(doc.get("integrator"), "integrator"),
        initial=_parse_initial(doc["initial"], model),
        diagnostics=list(diagnostics),
        events=list(events),
    )
    _validate_grid(config)
    _validate_labels(config)
    _validate_mean_zero(config)
    return config


def _validate_grid(config: RunConfig):
    n = config.n_nodes
    if n < 8 or (n & (n - 1)) != 0:
        _fail("n_nodes", f"must be a power of two >= 8, got {n}")
    max_k = max((m[0] for ms in config.initial.values() for m in ms), default=1)
    if max_k > n // 3:
        _fail("initial", f"mode {max_k} exceeds the dealiased band (n//3 = {n // 3})")


def _validate_mean_zero(config: RunConfig):
    # mode lists with k >= 1 are automatically mean-free; the check is kept
    # for when future initial-data forms carry a constant term
    if config.model in UNIDIRECTIONAL_IDS and any(m[0] == 0 for m in config.initial.get("f", [])):
        _fail("initial.f", "unidirectional profiles must have zero mean")


def parse_config(text: str) -> RunConfig:
    """Parse YAML (or a bare scenario-preset name) into a validated RunConfig."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config: YAML parse failure: {exc}") from None
    if isinstance(doc, str):
        doc = {"preset": doc}
    return build_config(doc)


def resolved_dict(config: RunConfig) -> dict:
    """Plain-python mapping with every default materialized (the echo form)."""
    params = {k: getattr(config.params, k) for k in _PARAM_KEYS}
    integ = {k: getattr(config.integrator, k) for k in _INTEGRATOR_KEYS}
    integ = {k: (v if k == "max_steps" else float(v)) for k, v in integ.items()}
    return {
        "model": config.model,
        "n_nodes": config.n_nodes,
        "t_max": config.t_max,
        "sample_every": config.sample_every,
        "name": config.name,
        "output_dir": config.output_dir,
        "seed": config.seed,
        "params": params,
        "integrator": integ,
        "initial": {k: [list(m) for m in v] for k, v in sorted(config.initial.items())},
        "diagnostics": list(config.diagnostics),
        "events": list(config.events),
    }


def dump_config(config: RunConfig) -> str:
    return yaml.safe_dump(resolved_dict(config), sort_keys=True, default_flow_style=None)
