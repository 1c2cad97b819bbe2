"""Post-processing figures for wavemodels run directories."""

from .io import RunArtifact
from .plots import plot_comparison, plot_curves, plot_norms

__version__ = "0.1.0"
