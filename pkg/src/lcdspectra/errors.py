"""Exception types shared across the package."""


class LcdSpectraError(Exception):
    """Base class for all package errors."""


class StructuralError(LcdSpectraError):
    """Field/grid shape or layout mismatch."""


class SymmetryError(LcdSpectraError):
    """Hermitian symmetry of spectral coefficients is broken beyond tolerance."""


class ParameterError(LcdSpectraError, ValueError):
    """Invalid or inadmissible parameter value."""


class DegenerateInputError(LcdSpectraError):
    """Input is identically zero (or near-zero) where a nonzero value is required."""


class AmplitudeError(LcdSpectraError):
    """Initial-data amplitude makes the construction ill-posed (near-singular normalization)."""


class BlowUpError(LcdSpectraError):
    """Non-finite value detected during time integration.

    Carries the last valid time and, when the harness owns checkpoints, the
    path of the last checkpoint written before the failure.
    """

    def __init__(self, message, time=None, checkpoint_path=None):
        super().__init__(message)
        self.time = time
        self.checkpoint_path = checkpoint_path


class FitError(LcdSpectraError):
    """Power-law fit cannot be performed (too few points in window)."""


class DataError(LcdSpectraError):
    """Time-series data violates its contract (nonpositive values, unordered times)."""


class MappingError(LcdSpectraError, KeyError):
    """A fitted series has no entry in the expectation table."""


class CheckpointError(LcdSpectraError):
    """Checkpoint file is corrupt or incompatible with the requested grid."""


class ConfigError(LcdSpectraError):
    """Run configuration file is missing, malformed, or inconsistent."""
