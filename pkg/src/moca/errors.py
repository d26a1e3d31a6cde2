"""Shared exception types.

Every failure the library can diagnose carries enough payload to print a
useful witness (the offending triple, the missing sites, the reducible
factor) instead of a bare message.
"""

from __future__ import annotations

__all__ = [
    "MocaError",
    "ParseError",
    "CarrierMismatch",
    "NotFinite",
    "BudgetExceeded",
    "DomainError",
    "ValidationError",
]


class MocaError(Exception):
    """Base class for all library errors."""


class ParseError(MocaError):
    """Malformed textual input; carries line/column when known."""

    def __init__(self, message, line=None, col=None):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(str(self))

    def __str__(self):
        where = ""
        if self.line is not None:
            where = f" (line {self.line}" + (f", col {self.col}" if self.col is not None else "") + ")"
        return f"{self.message}{where}"


class CarrierMismatch(MocaError):
    """Operands live over different fields, monoids, or dimensions."""


class NotFinite(MocaError):
    """A finite monoid or finite field was required."""


class BudgetExceeded(MocaError):
    """An exhaustive scan would overrun the configured budget."""

    def __init__(self, required, budget, what="search space"):
        self.required = required
        self.budget = budget
        self.what = what
        super().__init__(f"{what} of size {required} exceeds budget {budget}")


class DomainError(MocaError):
    """A pattern is not defined on every site an operation needs."""

    def __init__(self, missing, message="pattern undefined on required sites"):
        # missing: sorted list of monoid elements
        self.missing = list(missing)
        names = ", ".join(str(m) for m in self.missing)
        super().__init__(f"{message}: {names}")


class ValidationError(MocaError):
    """Structurally invalid input; `witness` pinpoints the violation."""

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)
