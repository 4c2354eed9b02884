"""Exception hierarchy shared by every module."""

from __future__ import annotations


class ParyError(Exception):
    """Base class for all library errors."""


class NonPrime(ParyError, ValueError):
    pass


class ReducibleModulus(ParyError, ValueError):
    pass


class FieldTooLarge(ParyError):
    pass


class DivisionByZero(ParyError, ZeroDivisionError):
    pass


class OrderMismatch(ParyError, ValueError):
    pass


class InvalidUnit(ParyError, ValueError):
    pass


class EvenCharacteristic(ParyError, ValueError):
    pass


class NotCoprime(ParyError, ValueError):
    pass


class ExprSyntaxError(ParyError, ValueError):
    """Malformed function expression; ``pos`` is the 0-based column."""

    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


class ExponentOverflow(ParyError, ValueError):
    pass


class BudgetExceeded(ParyError):
    pass


class InternalMismatch(ParyError, AssertionError):
    """Two independent computations of the same quantity disagree."""


class NonzeroAtOrigin(ParyError, ValueError):
    pass


class NotBent(ParyError, ValueError):
    pass


class NoCandidateMatch(InternalMismatch):
    pass


class EmptyDefiningSet(ParyError, ValueError):
    pass


class DuplicateElements(ParyError, ValueError):
    pass


class TableNotApplicable(ParyError, ValueError):
    pass


class HypothesisViolated(ParyError, ValueError):
    def __init__(self, clause: str, detail: str = ""):
        self.clause = clause
        msg = f"hypothesis violated: {clause}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class PredictionMismatch(InternalMismatch):
    pass
