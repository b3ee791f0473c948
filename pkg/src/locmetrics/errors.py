"""Exception types shared across the package."""

from __future__ import annotations


class ValidationError(ValueError):
    """Input violates a structural precondition.

    When the problem is tied to a specific access time or value, ``position``
    carries the earliest inconsistent position.
    """

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


class ParseError(ValidationError):
    """Malformed text input; ``position`` is the offending line number."""


class OracleMismatchError(RuntimeError):
    """A formula result disagreed with its brute-force oracle."""
