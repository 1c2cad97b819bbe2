"""Figure scripts: ``wavefigures curves|comparison|norms``.

Each subcommand reads run directories produced by the wavemodels CLI and
writes one PNG; flags are --run-dir, --out, --times, --labels, --time and
--reference.
"""

from __future__ import annotations

import argparse
import sys

from .io import RunArtifact
from .plots import plot_comparison, plot_curves, plot_norms


def _parse_floats(text):
    return [float(tok) for tok in text.split(",") if tok.strip()] if text else []


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="wavefigures",
                                     description="static figures from wavemodels run directories")
    sub = parser.add_subparsers(dest="command", required=True)

    p_curves = sub.add_parser("curves", help="overlay curve snapshots")
    p_curves.add_argument("--run-dir", required=True)
    p_curves.add_argument("--out", required=True)
    p_curves.add_argument("--times", default="", help="comma-separated times (default: all samples)")

    p_cmp = sub.add_parser("comparison", help="overlay h(x, t) across model runs")
    p_cmp.add_argument("--run-dir", action="append", required=True,
                       help="repeat for each run to overlay")
    p_cmp.add_argument("--out", required=True)
    p_cmp.add_argument("--time", type=float, required=True)
    p_cmp.add_argument("--reference", default=None,
                       help="optional external run directory plotted as a reference line")

    p_norms = sub.add_parser("norms", help="semilog norm decay")
    p_norms.add_argument("--run-dir", required=True)
    p_norms.add_argument("--out", required=True)
    p_norms.add_argument("--labels", default="", help="comma-separated labels (default: all)")

    args = parser.parse_args(argv)
    try:
        if args.command == "curves":
            plot_curves(RunArtifact(args.run_dir), _parse_floats(args.times), args.out)
        elif args.command == "comparison":
            runs = [RunArtifact(d) for d in args.run_dir]
            ref = RunArtifact(args.reference) if args.reference else None
            plot_comparison(runs, args.time, args.out, reference=ref)
        else:
            labels = [tok for tok in args.labels.split(",") if tok.strip()]
            plot_norms(RunArtifact(args.run_dir), labels, args.out)
    except (ValueError, KeyError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
