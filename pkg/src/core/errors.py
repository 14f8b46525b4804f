# src/core/errors.py
"""Exception types shared by the library, the CLI and the HTTP service."""


class DiagramError(ValueError):
    """Malformed diagram text, degree mismatch, or a map applied outside its domain."""


class FamilyError(ValueError):
    """Unsupported family for an operation, or n / r out of range."""


class ValidityError(ValueError):
    """A closed formula was requested outside the range where it holds."""


class BudgetExceeded(RuntimeError):
    """Enumeration budget or oracle cap exceeded."""
