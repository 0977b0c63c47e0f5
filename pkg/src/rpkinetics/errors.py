"""Exception types shared across the package."""


class RPKineticsError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(RPKineticsError):
    """Matrix dimensions are incompatible with the requested operation."""


class NotHermitianError(RPKineticsError):
    """A matrix required to be Hermitian deviates beyond tolerance."""


class BasisError(RPKineticsError):
    """A state or operator is expressed in the wrong spin basis."""


class NormalizationError(RPKineticsError):
    """Initial-state amplitudes violate |alpha|^2 + |beta|^2 = 1."""


class VanishingTraceError(RPKineticsError):
    """Trace too small to renormalize (the fully recombined limit)."""


class ImproperStateError(RPKineticsError):
    """A unit-trace state was required but the trace deviates from one."""


class UnsupportedModelError(RPKineticsError):
    """The model kind is not defined on the requested basis."""


class WeightError(RPKineticsError):
    """Decomposition weights violate normalization or positivity."""


class DomainError(RPKineticsError):
    """A scalar argument lies outside its allowed domain."""


class InvariantViolationError(RPKineticsError):
    """A propagated state failed its invariant checks."""

    def __init__(self, message: str, t: float | None = None):
        if t is not None:
            message = f"{message} (at t={t!r})"
        super().__init__(message)
        self.t = t


class ConfigError(RPKineticsError):
    """A run configuration is invalid."""
