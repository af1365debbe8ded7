"""Enumeration toolkit for permutations whose cycle lengths lie in a prescribed set.

Exact counts via big-integer recurrences, asymptotic models built from the
Mertens constant, and a verification harness that compares the two.
"""

from primecycles.errors import (
    EmptySupportError,
    InternalConsistencyError,
    InvalidArgumentError,
    OutOfDomainError,
    OutOfRangeError,
    PrimecyclesError,
    ResourceLimitError,
    UnsupportedSpecError,
)

__all__ = [
    "EmptySupportError",
    "InternalConsistencyError",
    "InvalidArgumentError",
    "OutOfDomainError",
    "OutOfRangeError",
    "PrimecyclesError",
    "ResourceLimitError",
    "UnsupportedSpecError",
]

__version__ = "0.1.0"
