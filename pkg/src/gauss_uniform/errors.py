"""Exception types raised across the package."""
from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the region where an operation is defined."""


class ComputationError(ArithmeticError):
    """An iteration failed to converge or produced corrupted output."""

    def __init__(self, message: str, index: int | None = None, module: str | None = None):
        super().__init__(message)
        self.index = index
        self.module = module


class VerificationFailure(AssertionError):
    """A checked property (e.g. monotonicity) does not hold.

    ``index`` is the first offending position, when there is one.
    """

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index
