"""Exception hierarchy.

Every error raised on bad input derives from :class:`DomainError`, which the
CLI maps to exit code 1.
"""


class DomainError(ValueError):
    """Input violates a mathematical precondition or invariant."""


class DimensionError(DomainError):
    pass


class NotHermitianError(DomainError):
    pass


class InvalidStateError(DomainError):
    pass


class ObservableNormError(DomainError):
    pass


class PreconditionError(DomainError):
    pass


class CoefficientError(DomainError):
    pass


class ConvergenceError(RuntimeError):
    """An iterative routine failed to reach its tolerance."""
