"""Exception types shared across the package."""


class QonsagerError(Exception):
    """Base class for all package errors."""


class InvalidQ(QonsagerError, ValueError):
    """q is zero, a root of unity, or otherwise unusable."""


class NonConvergent(QonsagerError, ValueError):
    """An infinite product or series was requested outside its domain."""


class DegenerateDenominator(QonsagerError, ZeroDivisionError):
    """A denominator vanished (or came within tolerance of zero)."""


class NonTerminating(QonsagerError, ValueError):
    """A hypergeometric series that should terminate does not."""


class InvalidMultiIndex(QonsagerError, ValueError):
    """A multi-index has negative or non-integer entries."""


class NotOnDiscreteSupport(QonsagerError, ValueError):
    """A point is not on the discrete support of a finite module."""


class IncompatibleSpins(QonsagerError, ValueError):
    """Spins are not positive half-integers, or parameters do not match them."""


class InvalidParameters(QonsagerError, ValueError):
    """Parameter vector has the wrong length or violates a constraint."""


class AmbiguousFit(QonsagerError, ValueError):
    """More than one spectral case fits the data within tolerance."""


class EigensolverFailure(QonsagerError, RuntimeError):
    """A dense eigendecomposition is unreliable."""


class RecurrenceBreakdown(QonsagerError, ZeroDivisionError):
    """A recurrence march divided by a vanishing coefficient."""


class OutOfRegion(QonsagerError, ValueError):
    """Parameters lie outside the region where the measure is positive."""


class ConfigError(QonsagerError, ValueError):
    """A run configuration is malformed."""


class DegenerateGap(DegenerateDenominator):
    """Two eigenvalues entering a spectral projector coincide."""


class ConditionViolation(InvalidParameters):
    """Parameters fall outside the region where the continuous orthogonality holds."""
