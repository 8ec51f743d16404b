"""Exception types shared across the package."""

from __future__ import annotations


class MultimagicError(Exception):
    """Base class for all errors raised by this package."""


class InvalidIndexError(MultimagicError, IndexError):
    """A column or cell index is out of range, duplicated, or misordered."""


class DomainError(MultimagicError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RankDeficientError(MultimagicError, ValueError):
    """The matrix does not have full row rank."""


class BudgetExceeded(MultimagicError):
    """A search or enumeration would exceed its work limit.

    ``partial`` carries whatever was produced before the limit was hit.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class FormatError(MultimagicError, ValueError):
    """An input file is malformed; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
