"""Exception types shared across the package.

Every error carries a short machine-readable ``code`` so the CLI can surface
failures as structured JSON instead of tracebacks.
"""


class MziError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"


class CutoffExceededError(MziError):
    """A requested basis ket lies outside the truncated grid."""

    code = "cutoff-exceeded"


class TruncationOverflowError(MziError):
    """An operation would push non-negligible weight past the cutoff."""

    code = "truncation-overflow"


class TruncationLossError(MziError):
    """State construction discarded more probability than the ceiling allows."""

    code = "truncation-loss"


class NormalizationError(MziError):
    """Input amplitudes are too far from unit norm (or identically zero)."""

    code = "bad-norm"


class ParameterError(MziError):
    """A parameter is outside its validated range."""

    code = "bad-parameter"


class UnattainableTargetError(MziError):
    """No parameter value of the family reaches the requested mean photon number."""

    code = "unattainable-target"


class SectorSupportError(MziError):
    """Particle-picture analytics received a state spanning several photon-number sectors."""

    code = "multi-sector"


class StateFileError(MziError):
    """A state file is malformed or violates the documented schema."""

    code = "bad-state-file"
