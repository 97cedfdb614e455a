"""Cancellation-free evaluation for far-away centers, and evaluator dispatch.

For a center at distance ``D`` from the (centered) data, the direct formula
``a**2 + b**2 - rbar**2`` subtracts two numbers of size ``D**2`` to get an
O(1) result and loses about ``2*log10(D)`` digits.  Here the center is
written in polar form ``(D cos t, D sin t)`` and every per-point quantity is
expanded in ``delta = 1/D`` so that no large terms cancel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CenterOnDataPoint, CenterTooClose
from .geometry import NormalizedPointSet
from .standard import BIG_CIRCLE, Evaluation, evaluate_standard, symmetric

__all__ = [
    "D_SWITCH",
    "W_FLOOR",
    "BigCircleIntermediates",
    "big_circle_intermediates",
    "evaluate_big_circle",
    "evaluate",
]

D_SWITCH = 2.0
W_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class BigCircleIntermediates:
    D: float
    theta: float
    delta: float
    c: float
    s: float
    p: np.ndarray
    w: np.ndarray
    tau: np.ndarray
    gamma: np.ndarray
    g: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    eta: np.ndarray
    kappa: np.ndarray
    # aggregates
    P: float
    Q: float
    X: float
    Y: float
    A: float
    B: float
    U: float
    V: float
    M: float
    N: float
    L: float
    gbar: float


def big_circle_intermediates(
    data: NormalizedPointSet, p: Sequence[float]
) -> BigCircleIntermediates:
    a, b = float(p[0]), float(p[1])
    D = math.hypot(a, b)
    if D == 0.0:
        raise CenterTooClose("big-circle formulas need a nonzero center distance")
    theta = math.atan2(b, a) % (2.0 * math.pi)
    delta = 1.0 / D
    # direction cosines straight from (a, b); avoids rounding through theta
    c = a / D
    s = b / D
    x, y, z = data.x, data.y, data.z

    pp = x * c + y * s
    # clamp: rounding can push the radicand just below zero on a data point
    w = np.sqrt(np.maximum(1.0 - 2.0 * delta * pp + delta * delta * z, 0.0))
    if w.min() <= W_FLOOR:
        raise CenterOnDataPoint(f"center ({a}, {b}) coincides with a data point")
    tau = 2.0 * pp - delta * z
    gamma = -tau / (1.0 + w)
    dg = delta * gamma
    g = (z + pp * gamma) / (2.0 + dg)
    alpha = (x + gamma * c) / w
    beta = (y + gamma * s) / w
    eta = 1.0 / (1.0 + dg)
    kappa = gamma / (2.0 + dg)

    ge = gamma * eta
    tge = tau * ge
    (gbar, m_tge, m_tgek, m_tk, zbar, X, Y, m_gge, m_age, m_bge, m_aae, m_bbe, m_abe) = (
        np.mean(
            np.stack((
                g, tge, tge * kappa, tau * kappa, z, x * ge, y * ge,
                gamma * ge, alpha * ge, beta * ge,
                alpha * alpha * eta, beta * beta * eta, alpha * beta * eta,
            )),
            axis=1,
        ).tolist()
    )

    d2 = delta * delta
    P = 0.5 * (m_tge - delta * m_tgek)
    Q = 0.5 * (m_tk + zbar)
    A = P + d2 * (P + Q) * Q
    B = 1.0 + d2 * Q
    U = (P + Q) * c - X
    V = (P + Q) * s - Y
    gq = m_gge - Q
    au = m_age - U
    bv = m_bge - V
    M = gq * c * c + 2.0 * au * c + m_aae
    N = gq * s * s + 2.0 * bv * s + m_bbe
    L = gq * c * s + au * s + bv * c + m_abe

    return BigCircleIntermediates(
        D, theta, delta, c, s, pp, w, tau, gamma, g, alpha, beta, eta, kappa,
        P, Q, X, Y, A, B, U, V, M, N, L, gbar,
    )


def evaluate_big_circle(
    data: NormalizedPointSet, p: Sequence[float], *, min_distance: float = D_SWITCH
) -> Evaluation:
    """F, grad F and Hessian at ``p`` by the big-circle formulas.

    ``F = -2*gbar - delta**2 * gbar**2``; gradient and Hessian follow from the
    aggregates of :func:`big_circle_intermediates`.  The data must be centered.
    ``min_distance`` guards against use on small circles, where the direct
    formulas are cheaper; pass ``0.0`` to evaluate anywhere off the data.
    """
    D = math.hypot(float(p[0]), float(p[1]))
    if D < min_distance:
        raise CenterTooClose(f"center distance {D} below {min_distance}")
    it = big_circle_intermediates(data, p)
    d, c, s = it.delta, it.c, it.s
    d2 = d * d
    A, B, Q, U, V = it.A, it.B, it.Q, it.U, it.V

    value = -2.0 * it.gbar - d2 * it.gbar * it.gbar
    gradient = 2.0 * d * np.array([A * c - B * it.X, A * s - B * it.Y])
    hessian = 2.0 * d2 * symmetric(
        U * (2.0 * c - d2 * U) - Q * s * s - B * it.N,
        U * s + V * c - d2 * U * V + Q * s * c + B * it.L,
        V * (2.0 * s - d2 * V) - Q * c * c - B * it.M,
    )
    return Evaluation(value, gradient, hessian, BIG_CIRCLE)


def evaluate(data: NormalizedPointSet, p: Sequence[float]) -> Evaluation:
    """Evaluate with big-circle formulas when ``|p| >= D_SWITCH``, else directly."""
    if math.hypot(float(p[0]), float(p[1])) >= D_SWITCH:
        return evaluate_big_circle(data, p)
    return evaluate_standard(data, p)
