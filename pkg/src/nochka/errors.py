"""Exception types shared across the package."""

from __future__ import annotations


class ParseError(ValueError):
    """Input text failed to parse; carries a human-readable location."""

    def __init__(self, message: str, *, line: int | None = None,
                 column: int | None = None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        elif column is not None:
            loc = f" (position {column})"
        super().__init__(message + loc)
        self.line = line
        self.column = column


class ResourceBudgetError(RuntimeError):
    """A configured computation budget (steps, table size, point cap) was exceeded."""


class QuadratureError(ResourceBudgetError):
    """Circle quadrature did not converge within the point cap."""

    def __init__(self, message: str, achieved: float | None = None):
        if achieved is not None:
            message += f" (achieved difference {achieved:.3e})"
        super().__init__(message)
        self.achieved = achieved


class VerificationError(RuntimeError):
    """An exact internal consistency check failed."""
