"""Exceptions raised by the fitting routines."""


class CircleFitError(Exception):
    """Base class for all circlefit errors."""


class DegenerateInput(CircleFitError, ValueError):
    """Too few points, coincident points, or a singular algebraic system."""


class CenterOnDataPoint(CircleFitError, ArithmeticError):
    """The candidate center sits (numerically) on a data point."""


class CenterTooClose(CircleFitError, ValueError):
    """Big-circle formulas requested for a center closer than the switch distance."""


class SingularDamping(CircleFitError, ArithmeticError):
    """Damped Hessian is not positive definite; the damping must be raised."""


class AmbiguousValley(CircleFitError):
    """The sign of the third moment is lost in round-off; no valley can be picked."""


class NoConvergence(CircleFitError, RuntimeError):
    """Extended-precision refinement did not reach its tolerance."""
