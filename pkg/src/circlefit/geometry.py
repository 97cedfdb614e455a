"""Point sets, the centering/scaling transform and the reduced objective.

All fitting happens on centered data scaled to unit RMS distance from the
centroid.  On such data the geometric objective, after eliminating the
radius (best radius = mean distance to the center), reduces to

    F(a, b) = a**2 + b**2 - rbar**2

which differs from the full sum of squared distances only by a constant
and the factor ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import DegenerateInput

__all__ = [
    "Circle",
    "Line",
    "NormalizationTransform",
    "NormalizedPointSet",
    "as_points",
    "normalize",
    "denormalize",
    "radius_for_center",
    "reduced_objective",
    "full_objective",
]

NORMALIZED = "normalized"
RAW = "raw"


@dataclass(frozen=True)
class Circle:
    a: float
    b: float
    R: float
    frame: str = NORMALIZED

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b) and np.isfinite(self.R)):
            raise ValueError(f"non-finite circle parameters {(self.a, self.b, self.R)}")
        if self.R < 0:
            raise ValueError(f"negative radius {self.R}")

    @property
    def center(self) -> tuple[float, float]:
        return (self.a, self.b)

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.b, self.R])


@dataclass(frozen=True)
class Line:
    """Best fitting line, returned when no best circle exists."""

    point: tuple[float, float]
    direction: tuple[float, float]
    frame: str = NORMALIZED

    def __post_init__(self):
        norm = float(np.hypot(*self.direction))
        if abs(norm - 1.0) > 4 * np.finfo(float).eps:
            raise ValueError(f"line direction must have unit norm, got {norm}")


FitResult = Union[Circle, Line]


@dataclass(frozen=True)
class NormalizationTransform:
    x_mean: float
    y_mean: float
    scale: float

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    @classmethod
    def identity(cls) -> "NormalizationTransform":
        return cls(0.0, 0.0, 1.0)


@dataclass(frozen=True, eq=False)
class NormalizedPointSet:
    """Centered, unit-RMS points together with the moments the fits reuse.

    ``x``, ``y`` and ``z = x**2 + y**2`` are read-only arrays; ``xx``, ``yy``,
    ``xy`` and ``xxy`` are sample means (``xxy`` is the mean of ``x**2 * y``).
    """

    x: np.ndarray
    y: np.ndarray
    transform: NormalizationTransform
    z: np.ndarray = field(init=False)
    xx: float = field(init=False)
    yy: float = field(init=False)
    xy: float = field(init=False)
    xxy: float = field(init=False)

    def __post_init__(self):
        x = np.array(self.x, dtype=float)
        y = np.array(self.y, dtype=float)
        z = x * x + y * y
        for arr in (x, y, z):
            arr.setflags(write=False)
        set_ = object.__setattr__
        set_(self, "x", x)
        set_(self, "y", y)
        set_(self, "z", z)
        # np.mean reduces with pairwise summation
        set_(self, "xx", float(np.mean(x * x)))
        set_(self, "yy", float(np.mean(y * y)))
        set_(self, "xy", float(np.mean(x * y)))
        set_(self, "xxy", float(np.mean(x * x * y)))

    @property
    def n(self) -> int:
        return self.x.size

    @property
    def points(self) -> np.ndarray:
        return np.column_stack((self.x, self.y))

    def __len__(self) -> int:
        return self.n


def as_points(points) -> np.ndarray:
    """Validate and return points as a float ``(n, 2)`` array."""
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        return pts.reshape(0, 2)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError(f"expected an (n, 2) array of points, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise DegenerateInput("point coordinates must be finite")
    return pts


def normalize(points) -> NormalizedPointSet:
    """Center the points at their centroid and scale to unit RMS radius."""
    pts = as_points(points)
    n = pts.shape[0]
    if n < 3:
        raise DegenerateInput(f"at least 3 points are needed, got {n}")
    x_mean, y_mean = np.mean(pts, axis=0)
    xc = pts[:, 0] - x_mean
    yc = pts[:, 1] - y_mean
    scale = float(np.sqrt(np.mean(xc * xc) + np.mean(yc * yc)))
    if scale == 0.0:
        raise DegenerateInput("all points coincide")
    t = NormalizationTransform(float(x_mean), float(y_mean), scale)
    return NormalizedPointSet(xc / scale, yc / scale, t)


def denormalize(result: FitResult, t: NormalizationTransform) -> FitResult:
    """Map a normalized-frame circle (or line) back to raw coordinates."""
    if result.frame != NORMALIZED:
        raise ValueError("expected a result in the normalized frame")
    S = t.scale
    if isinstance(result, Line):
        px, py = result.point
        return Line((S * px + t.x_mean, S * py + t.y_mean), result.direction, RAW)
    return Circle(S * result.a + t.x_mean, S * result.b + t.y_mean, S * result.R, RAW)


def _distances(data: NormalizedPointSet, p: Sequence[float]) -> np.ndarray:
    a, b = p
    return np.hypot(data.x - a, data.y - b)


def radius_for_center(data: NormalizedPointSet, p: Sequence[float]) -> float:
    """Best radius for a fixed center: the mean distance to the points."""
    return float(np.mean(_distances(data, p)))


def reduced_objective(data: NormalizedPointSet, p: Sequence[float]) -> float:
    a, b = p
    rbar = radius_for_center(data, p)
    return a * a + b * b - rbar * rbar


def full_objective(data: NormalizedPointSet, p: Sequence[float]) -> float:
    """Sum of squared geometric distances with the radius set to its optimum."""
    r = _distances(data, p)
    return float(np.sum((r - np.mean(r)) ** 2))
