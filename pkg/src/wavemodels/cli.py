"""Command-line interface.

Verbs: run, compare, check, list-models, list-presets.  Exit codes: 0 clean
success, 1 run stopped by a declared event, 2 configuration error, 3 numeric
failure, 4 invariant failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .checks import check
from .config import MODEL_IDS, build_config, parse_config, resolved_dict
from .errors import ConfigError, NumericError, UsageError, WaveModelsError
from .presets import scenario_preset, scenario_presets
from .runner import EXIT_CONFIG, EXIT_INVARIANT, EXIT_NUMERIC, OUTPUT_ENV_VAR, compare, run

_MODEL_BLURBS = {
    "viscous-bi": "shear-viscosity wave model, bidirectional (h, h_t)",
    "viscous-uni": "shear-viscosity model, unidirectional profile",
    "viscous-uni-full": "as viscous-uni, keeping the small viscous commutators",
    "odd-bi": "odd/Hall-viscosity wave model, bidirectional",
    "odd-uni": "odd-viscosity model, unidirectional profile",
    "inviscid-bi": "quadratic inviscid wave model, bidirectional",
    "inviscid-uni": "inviscid model, unidirectional profile",
    "internal-bi": "internal-wave model with Atwood number, bidirectional",
    "internal-uni": "internal-wave model, unidirectional profile",
    "internal-sys": "first-order (elevation, sheet strength) system",
    "zmodel": "closed-curve interface with evolving sheet strength",
    "kh": "Kelvin-Helmholtz curve model, frozen sheet strength",
    "kh-refined": "KH model plus the first-moment kernel correction",
    "br-reference": "full Birkhoff-Rott quadrature, frozen sheet strength",
}


def _load_config(source: str, args) -> "RunConfig":
    if os.path.exists(source):
        with open(source) as fh:
            config = parse_config(fh.read())
    else:
        # bare names refer to scenario presets
        config = parse_config(source)
    overrides = {}
    if args.nodes is not None:
        overrides["n_nodes"] = args.nodes
    if args.tmax is not None:
        overrides["t_max"] = args.tmax
    if args.sample_every is not None:
        overrides["sample_every"] = args.sample_every
    if args.output_dir is not None:
        overrides["output_dir"] = args.output_dir
    if overrides:
        doc = resolved_dict(config)
        doc.update(overrides)
        config = build_config(doc)
    return config


def _add_override_flags(sub):
    sub.add_argument("--nodes", type=int, default=None, help="override n_nodes")
    sub.add_argument("--tmax", type=float, default=None, help="override t_max")
    sub.add_argument("--sample-every", type=float, default=None, help="override sample_every")
    sub.add_argument("--output-dir", default=None,
                     help=f"override output directory (default root: ${OUTPUT_ENV_VAR} or ./runs)")
    sub.add_argument("--force", action="store_true", help="overwrite an existing run directory")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="wavemodels",
                                     description="pseudospectral interface-wave model runner")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one configured run")
    p_run.add_argument("config", help="config file path or scenario preset name")
    _add_override_flags(p_run)

    p_cmp = sub.add_parser("compare", help="run several models from shared initial data")
    p_cmp.add_argument("configs", nargs="+", help="config files or preset names")
    _add_override_flags(p_cmp)

    p_chk = sub.add_parser("check", help="run the invariant suite")
    p_chk.add_argument("--full", action="store_true", help="include the slow invariants")
    p_chk.add_argument("--report", default=None, help="also write the JSON report to this path")

    sub.add_parser("list-models", help="print the model-id table")
    sub.add_parser("list-presets", help="print the scenario presets")

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericError,) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, WaveModelsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def _dispatch(args) -> int:
    if args.command == "run":
        result = run(_load_config(args.config, args), force=args.force)
        print(f"run written to {result.path} (stop: {result.stop_reason})")
        if result.error:
            print(f"numeric failure: {result.error}", file=sys.stderr)
        return result.exit_code

    if args.command == "compare":
        configs = [_load_config(c, args) for c in args.configs]
        out = args.output_dir or os.path.join(
            os.environ.get(OUTPUT_ENV_VAR, "runs"), "comparison")
        for cfg in configs:
            cfg.output_dir = None  # sub-runs live inside the comparison dir
        table, results = compare(configs, out, force=args.force)
        print(f"comparison table written to {table}")
        worst = max((r.exit_code for r in results), default=0)
        return worst

    if args.command == "check":
        level = "full" if args.full else "fast"
        passed, results = check(level)
        report = {
            "level": level,
            "passed": passed,
            "checks": [r.to_dict() for r in results],
        }
        text = json.dumps(report, indent=2)
        print(text)
        if args.report:
            with open(args.report, "w") as fh:
                fh.write(text + "\n")
        return 0 if passed else EXIT_INVARIANT

    if args.command == "list-models":
        for model in MODEL_IDS:
            print(f"{model:18s} {_MODEL_BLURBS[model]}")
        return 0

    if args.command == "list-presets":
        for name, preset in scenario_presets().items():
            print(f"{name:10s} {preset.description}")
        return 0

    raise UsageError(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
