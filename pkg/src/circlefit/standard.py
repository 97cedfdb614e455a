"""Objective, gradient and Hessian of the reduced objective (small circles)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CenterOnDataPoint
from .geometry import NormalizedPointSet

STANDARD = "standard"
BIG_CIRCLE = "big_circle"

# distances below this make u_i, v_i meaningless (normalized frame)
R_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class Evaluation:
    value: float
    gradient: np.ndarray
    hessian: np.ndarray
    evaluator_used: str

    @property
    def grad_norm(self) -> float:
        return float(np.hypot(self.gradient[0], self.gradient[1]))


def symmetric(h11: float, h12: float, h22: float) -> np.ndarray:
    """2x2 symmetric matrix sharing one stored off-diagonal value."""
    return np.array([[h11, h12], [h12, h22]])


def evaluate_standard(data: NormalizedPointSet, p: Sequence[float]) -> Evaluation:
    """F, grad F and the Hessian at center ``p`` by the direct formulas.

    With ``u_i = (x_i - a)/r_i`` and ``v_i = (y_i - b)/r_i``::

        grad/2 = [a + ubar*rbar, b + vbar*rbar]
        H/2    = [[1 - ubar**2 - rbar*mean(v*v/r), -ubar*vbar + rbar*mean(u*v/r)],
                  [        (symmetric)           , 1 - vbar**2 - rbar*mean(u*u/r)]]

    Raises CenterOnDataPoint when some ``r_i <= R_FLOOR``.
    """
    a, b = float(p[0]), float(p[1])
    dx = data.x - a
    dy = data.y - b
    r = np.hypot(dx, dy)
    if r.min() <= R_FLOOR:
        raise CenterOnDataPoint(f"center ({a}, {b}) coincides with a data point")
    u = dx / r
    v = dy / r
    ur = u / r
    vr = v / r
    rbar, ubar, vbar, uur, vvr, uvr = np.mean(
        np.stack((r, u, v, u * ur, v * vr, u * vr)), axis=1
    ).tolist()

    value = a * a + b * b - rbar * rbar
    gradient = 2.0 * np.array([a + ubar * rbar, b + vbar * rbar])
    hessian = 2.0 * symmetric(
        1.0 - ubar * ubar - rbar * vvr,
        -ubar * vbar + rbar * uvr,
        1.0 - vbar * vbar - rbar * uur,
    )
    return Evaluation(value, gradient, hessian, STANDARD)
