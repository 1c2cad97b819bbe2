"""Readers for wavemodels run directories.

A run directory holds ``snapshots.txt`` (one row per sample time per node,
single header line naming the columns), ``diagnostics.txt`` (rows of
``t label value`` plus trailing ``# decay-rate ...`` comment rows) and
``resolved_config.yaml``.  Everything here is read-only.
"""

from __future__ import annotations

import os
import warnings

import numpy as np
import yaml


class RunArtifact:
    """Parsed view of one run directory."""

    def __init__(self, path: str):
        self.path = path
        snap = os.path.join(path, "snapshots.txt")
        if not os.path.exists(snap):
            raise FileNotFoundError(f"{path} does not look like a run directory (no snapshots.txt)")
        with open(snap) as fh:
            header = fh.readline().strip()
        if not header.startswith("# "):
            raise ValueError(f"{snap}: missing column header")
        self.columns = header[2:].split()
        if self.columns[0] != "t" or self.columns[1] not in ("x", "alpha"):
            raise ValueError(f"{snap}: unexpected columns {self.columns}")
        data = np.loadtxt(snap)
        data = np.atleast_2d(data)
        if data.shape[1] != len(self.columns):
            raise ValueError(f"{snap}: {data.shape[1]} columns, header names {len(self.columns)}")
        self.table = data
        self.times = np.unique(data[:, 0])
        if not np.all(np.diff(self.times) > 0):
            raise ValueError(f"{snap}: sample times not sorted")

        self.model = None
        cfg_path = os.path.join(path, "resolved_config.yaml")
        if os.path.exists(cfg_path):
            with open(cfg_path) as fh:
                self.config = yaml.safe_load(fh)
            self.model = self.config.get("model")
        else:
            self.config = {}

        self.diagnostics, self.decay_rates = _load_diagnostics(os.path.join(path, "diagnostics.txt"))

    @property
    def is_curve(self) -> bool:
        return self.columns[1] == "alpha"

    @property
    def label(self) -> str:
        return self.model or os.path.basename(os.path.normpath(self.path))

    def frame(self, t: float, warn: bool = True) -> dict:
        """Columns at the sample nearest to t (warns when not an exact match)."""
        i = int(np.argmin(np.abs(self.times - t)))
        nearest = self.times[i]
        if warn and abs(nearest - t) > 1e-9 * max(1.0, abs(t)):
            warnings.warn(f"time {t} not sampled; using nearest sample t={nearest}",
                          stacklevel=2)
        rows = self.table[self.table[:, 0] == nearest]
        return {name: rows[:, j] for j, name in enumerate(self.columns)}

    def norm_series(self, label: str):
        """(times, values) of one diagnostics label."""
        if label not in self.diagnostics:
            available = ", ".join(sorted(self.diagnostics)) or "none"
            raise KeyError(f"diagnostics label {label!r} not in this run; available: {available}")
        rows = self.diagnostics[label]
        return rows[:, 0], rows[:, 1]


def _load_diagnostics(path: str):
    series: dict[str, list] = {}
    decay: dict[str, dict] = {}
    if not os.path.exists(path):
        return {}, {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if parts and parts[0] == "decay-rate":
                    decay[parts[1]] = {
                        "rate": float(parts[2]),
                        "r_squared": float(parts[4]),
                        "window": (float(parts[6]), float(parts[7])),
                    }
                continue
            t, label, value = line.split()
            series.setdefault(label, []).append((float(t), float(value)))
    return {k: np.array(v) for k, v in series.items()}, decay
