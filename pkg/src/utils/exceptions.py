"""
Exception hierarchy for geometry, isotopy and file errors.
"""
from typing import Any, Optional


class IsotopyException(Exception):
    """Base exception for the isotopy toolkit."""

    def __init__(self, message: str, detail: Optional[Any] = None):
        self.message = message
        self.detail = detail
        super().__init__(self.message)


class DomainError(IsotopyException):
    """Input lies outside the domain of an operation (off H, outside a region, non-finite)."""
    pass


class DegenerateGeometryError(IsotopyException):
    """A ray or segment construction has no unique answer."""
    pass


class BracketError(IsotopyException):
    """Bisection was given an interval without a sign change."""
    pass


class SingularityError(IsotopyException):
    """A closed-form expression hit a vanishing denominator."""
    pass


class SeamError(IsotopyException):
    """Two branch definitions of a piecewise map disagree on their overlap."""
    pass


class FrameFormatError(IsotopyException):
    """A frame file could not be parsed."""
    pass
