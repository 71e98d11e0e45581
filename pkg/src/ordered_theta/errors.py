"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class ThetaError(Exception):
    """Base class for every error raised by this package."""


class DuplicatePoint(ThetaError):
    pass


class BoundaryDegeneracy(ThetaError):
    """A target lies within the angular tolerance of a cone boundary ray."""


class GeneralPositionViolation(ThetaError):
    def __init__(self, report):
        self.report = report
        kinds = ", ".join(f"{i}-{j}:{k}" for i, j, k in report.violations[:5])
        more = "" if len(report.violations) <= 5 else f" (+{len(report.violations) - 5} more)"
        super().__init__(f"point set is not in general position: {kinds}{more}")


class InvalidOrder(ThetaError):
    pass


class AmbiguousClosest(ThetaError):
    """Two candidates tie on bisector distance; general position was violated."""


class TooLarge(ThetaError):
    pass


class WrongFamily(ThetaError):
    pass


class InvalidConeCount(ThetaError):
    pass


class DegenerateAngle(ThetaError):
    pass


class NotATower(ThetaError):
    pass


class InvalidFamily(ThetaError):
    pass


class BadEps(ThetaError):
    pass


class BetaRealizationFailure(ThetaError):
    pass


class ResampleBudgetExceeded(ThetaError):
    pass


class ConstructionFailure(ThetaError):
    """A generated instance does not build into the intended graph."""
