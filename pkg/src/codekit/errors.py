"""Exception types shared across codekit."""

from __future__ import annotations


class CodekitError(Exception):
    """Base class for all codekit errors."""


class FieldError(CodekitError, ValueError):
    """Invalid field description, mismatched fields, or element out of range."""


class ConstraintError(CodekitError, ValueError):
    """A construction's parameter inequality does not hold.

    The message starts with the violated inequality, e.g. ``"3(ℓ−1) < n violated"``.
    """


class InvalidCodeError(CodekitError, ValueError):
    """A code object fails one of its structural invariants."""


class CompatibilityError(CodekitError, ValueError):
    """Encoders are missing or not compatible with the required bilinear form."""


class BudgetExceeded(CodekitError, RuntimeError):
    """An exhaustive enumeration would exceed the configured budget."""
