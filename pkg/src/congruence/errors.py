"""Exception hierarchy shared by every module."""

from __future__ import annotations


class CongruenceError(Exception):
    """Base class for all errors raised by this package."""

    reason = "error"


class FieldMismatchError(CongruenceError):
    reason = "field_mismatch"


class NotASquareError(CongruenceError):
    reason = "not_a_square"


class NegativeDegreeError(CongruenceError):
    """A Laurent entry kept a negative-degree term, so its limit at t = 0 does not exist."""

    reason = "negative_degree"


class ShapeError(CongruenceError, ValueError):
    reason = "shape_mismatch"


class DependentColumnsError(CongruenceError):
    reason = "dependent_columns"


class BudgetExceededError(CongruenceError):
    reason = "budget_exceeded"


class NotFoundError(CongruenceError):
    reason = "not_found"


class RankPreconditionError(CongruenceError):
    reason = "rank_precondition"


class HypothesisViolation(CongruenceError):
    """An intermediate rank or pattern check of a construction failed."""

    reason = "hypothesis_violation"


class VerificationError(CongruenceError):
    reason = "verification_failed"
