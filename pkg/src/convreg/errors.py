"""Exception types."""
from __future__ import annotations


class ConvRegError(Exception):
    """Base class for library errors."""


class DimensionError(ConvRegError, ValueError):
    pass


class EmptySetError(ConvRegError, ValueError):
    pass


class NotMemberError(ConvRegError, ValueError):
    """A point required to lie in a set does not."""


class UnsupportedError(ConvRegError):
    """Norm/mode/variant combination the library does not handle."""


class NonMonotoneError(ConvRegError):
    """Bisection observed an inclusion that is not monotone in eta."""


class InstanceError(ConvRegError):
    """Invalid instance file; carries the offending line and field."""

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(f"field '{field}'")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)
