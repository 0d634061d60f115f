"""Exception taxonomy shared across the package.

Preconditions and hypothesis failures are user-recoverable (a different
configuration may work); numeric failures indicate the computation itself
broke and should be treated as bugs or precision exhaustion.
"""


class SphereLPError(Exception):
    """Base class for all package errors."""


class ArgumentError(SphereLPError, ValueError):
    """Malformed argument (wrong type, out-of-domain dimension or degree)."""


class PreconditionError(SphereLPError):
    """A documented precondition of the requested operation does not hold."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class RangeError(PreconditionError):
    """A scalar parameter falls outside its admissible window."""

    def __init__(self, message, window=None):
        super().__init__(message, condition="range")
        self.window = window


class ConditionError(PreconditionError):
    """A structural hypothesis (ratio inequality, Krein condition) fails."""


class HypothesisViolation(SphereLPError):
    """Computed certificate contradicts the hypothesis it was meant to verify."""


class DegenerateConfigurationError(PreconditionError):
    """A closed-form denominator vanishes at this parameter combination."""


class MOutOfRangeError(PreconditionError):
    """No degree admits a solution of the cardinality equation for this M."""

    def __init__(self, message, ranges=None):
        super().__init__(message, condition="cardinality-range")
        self.ranges = ranges or []


class NumericError(SphereLPError):
    """Internal numeric failure (root isolation, residual blow-up)."""


class InvariantViolation(NumericError):
    """A theorem-guaranteed invariant failed numerically (e.g. weight sign)."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class PotentialDomainError(SphereLPError):
    """Potential evaluated at or beyond a singularity of its domain."""
