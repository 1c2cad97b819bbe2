"""Static figures from run directories.

Three plot kinds: curve snapshot overlays, model-comparison overlays of the
elevation and semilog norm-decay plots.  Output is PNG with metadata
stripped, so re-rendering the same inputs gives byte-identical files.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import RunArtifact

# no timestamps, no library version strings: keep the bytes stable
_SAVEFIG = {"dpi": 110, "metadata": {"Software": None}}


def _new_axes(width=6.4, height=4.8):
    fig, ax = plt.subplots(figsize=(width, height))
    return fig, ax


def plot_curves(run: RunArtifact, times, out: str) -> str:
    """Overlay the closed curve at the requested times (all samples if empty)."""
    if not run.is_curve:
        raise ValueError(f"{run.path} is not a curve-model run; plot_curves needs one")
    if not times:
        times = list(run.times)
    fig, ax = _new_axes(5.6, 5.6)
    for t in times:
        frame = run.frame(t)
        z1 = np.append(frame["z1"], frame["z1"][0])
        z2 = np.append(frame["z2"], frame["z2"][0])
        nearest = run.times[np.argmin(np.abs(run.times - t))]
        ax.plot(z1, z2, linewidth=1.2, label=f"t = {nearest:g}")
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.legend(fontsize=8, loc="upper right")
    ax.set_title(run.label)
    fig.tight_layout()
    fig.savefig(out, **_SAVEFIG)
    plt.close(fig)
    return out


def plot_comparison(runs: list[RunArtifact], time: float, out: str,
                    reference: RunArtifact | None = None) -> str:
    """Overlay h(x, time) across graph-model runs sharing a grid."""
    if not runs:
        raise ValueError("plot_comparison needs at least one run")
    for run in runs:
        if run.is_curve:
            raise ValueError(f"{run.path} is a curve run; comparison plots need graph runs")
    x0 = runs[0].frame(runs[0].times[0], warn=False)["x"]
    for run in runs[1:]:
        x = run.frame(run.times[0], warn=False)["x"]
        if x.shape != x0.shape or not np.allclose(x, x0):
            raise ValueError("comparison runs must share a grid")
    field = "h" if "h" in runs[0].columns else "f"
    fig, ax = _new_axes()
    for run in runs:
        frame = run.frame(time)
        ax.plot(frame["x"], frame[field], linewidth=1.2, label=run.label)
    if reference is not None:
        frame = reference.frame(time)
        ref_field = "h" if "h" in reference.columns else reference.columns[2]
        ax.plot(frame["x"], frame[ref_field], "k--", linewidth=1.0, label="reference")
    ax.set_xlabel("x")
    ax.set_ylabel(field)
    ax.set_title(f"t = {time:g}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out, **_SAVEFIG)
    plt.close(fig)
    return out


def plot_norms(run: RunArtifact, labels, out: str) -> str:
    """Semilog norm-vs-time plot with the stored decay-rate annotations."""
    if not run.diagnostics:
        raise ValueError(f"{run.path} has no diagnostics")
    if not labels:
        labels = sorted(run.diagnostics)
    fig, ax = _new_axes()
    for label in labels:
        times, values = run.norm_series(label)
        text = label
        if label in run.decay_rates:
            text += f" (rate {run.decay_rates[label]['rate']:.3g})"
        ax.semilogy(times, values, linewidth=1.2, label=text)
    ax.set_xlabel("t")
    ax.set_ylabel("norm")
    ax.set_title(run.label)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out, **_SAVEFIG)
    plt.close(fig)
    return out
