"""Exception types shared across the package."""


class PrimecyclesError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgumentError(PrimecyclesError, ValueError):
    """An argument is outside the documented domain of an operation."""


class OutOfRangeError(PrimecyclesError, ValueError):
    """A query exceeds the range a table or spec was built to cover."""


class OutOfDomainError(PrimecyclesError, ValueError):
    """A real argument lies outside the domain of an analytic evaluator."""


class ResourceLimitError(PrimecyclesError, RuntimeError):
    """A request exceeds a configured memory or size cap."""


class UnsupportedSpecError(PrimecyclesError, ValueError):
    """The cycle-length spec lacks a property the operation requires."""


class EmptySupportError(PrimecyclesError, ValueError):
    """A distribution has no support (no valid permutation exists)."""


class InternalConsistencyError(PrimecyclesError, RuntimeError):
    """Two internal computations of the same quantity disagree beyond budget."""
