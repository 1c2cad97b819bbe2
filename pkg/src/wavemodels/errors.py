"""Exception hierarchy shared by all wavemodels modules.

The CLI maps these onto exit codes, so every user-facing failure should be
raised as one of the classes below rather than a bare ValueError.
"""


class WaveModelsError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(WaveModelsError):
    """Invalid configuration: unknown keys, bad model ids, out-of-range values."""


class ParameterError(WaveModelsError):
    """Physical/model parameters outside their admissible range."""


class PreconditionError(WaveModelsError):
    """An operation's input precondition was violated (e.g. non-zero-mean profile)."""


class UsageError(WaveModelsError):
    """Operands that cannot be combined (mismatched grids, wrong state kind)."""


class GeometryError(WaveModelsError):
    """Degenerate curve geometry: vanishing tangent, coincident nodes."""


class NumericError(WaveModelsError):
    """Non-finite values or numeric overflow encountered during evaluation."""


class FitError(WaveModelsError):
    """A least-squares fit was requested on data it cannot handle."""
