"""Reference fits: the Kasa algebraic fit and classic three-parameter GN / LM.

The iterative baselines work on ``(a, b, R)`` with residuals ``r_i - R`` and
deliberately use only the direct formulas, no valley guard and the usual
step-size stopping rules, so they show the failure modes the new solver
avoids (divergence from poor starts, accuracy capped near ``sqrt(eps)``).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import CenterOnDataPoint, DegenerateInput
from .geometry import Circle, NormalizedPointSet
from .solver import EPS, FitReport, Termination, TraceRow

DIVERGENCE_BOX = 1e6
SINGULAR_RTOL = 1e-13


class StopRule(str, enum.Enum):
    STEP_BELOW_SQRT_EPS = "StepBelowSqrtEps"
    STEP_BELOW_EPS = "StepBelowEps"

    @property
    def threshold(self) -> float:
        return math.sqrt(EPS) if self is StopRule.STEP_BELOW_SQRT_EPS else EPS

    @property
    def termination(self) -> Termination:
        return Termination(self.value)


@dataclass(frozen=True)
class BaselineConfig:
    stop_rule: StopRule = StopRule.STEP_BELOW_SQRT_EPS
    lambda_init: float = 1e-3
    lambda_up: float = 10.0
    lambda_down: float = 0.1
    max_iters: int = 500
    step_halving: bool = False
    max_halvings: int = 60
    max_inner_rejections: int = 60
    divergence_box: float = DIVERGENCE_BOX


GN_CONFIG = BaselineConfig(StopRule.STEP_BELOW_SQRT_EPS)
GNM_CONFIG = BaselineConfig(StopRule.STEP_BELOW_EPS)
LM_CONFIG = BaselineConfig(StopRule.STEP_BELOW_SQRT_EPS)


def kasa_fit(data: NormalizedPointSet) -> Circle:
    """Algebraic fit of ``z ~ 2a x + 2b y + c`` by centered normal equations.

    Raises DegenerateInput when the points are (numerically) collinear.
    """
    xx, yy, xy = data.xx, data.yy, data.xy
    det = xx * yy - xy * xy
    if det <= SINGULAR_RTOL * (xx + yy) ** 2:
        raise DegenerateInput("points are collinear; the algebraic fit is singular")
    xz = float(np.mean(data.x * data.z))
    yz = float(np.mean(data.y * data.z))
    # normal equations for (2a, 2b); x and y are centered so c decouples
    a = 0.5 * (yy * xz - xy * yz) / det
    b = 0.5 * (xx * yz - xy * xz) / det
    xbar = float(np.mean(data.x))
    ybar = float(np.mean(data.y))
    c = float(np.mean(data.z)) - 2 * a * xbar - 2 * b * ybar
    return Circle(a, b, math.sqrt(max(c + a * a + b * b, 0.0)))


def _residuals(data: NormalizedPointSet, theta: np.ndarray):
    """Residuals ``r_i - R``, distances, and the Jacobian ``[-u, -v, -1]``."""
    dx = data.x - theta[0]
    dy = data.y - theta[1]
    r = np.hypot(dx, dy)
    if r.min() <= 1e-12:
        return None
    J = np.column_stack((-dx / r, -dy / r, -np.ones_like(r)))
    return r - theta[2], r, J


def _current(data, theta):
    out = _residuals(data, theta)
    if out is None:
        raise CenterOnDataPoint(f"center {theta[:2]} coincides with a data point")
    return out


def _objective(res, r, R) -> tuple[float, float]:
    """Sum of squares and a bound on its rounding error."""
    F = float(res @ res)
    tol = 4 * EPS * float(np.abs(res) @ (r + abs(R)))
    return F, tol


def _stopped(h, theta, thr) -> bool:
    return float(np.linalg.norm(h)) < thr * max(float(np.linalg.norm(theta)), 1.0)


def _finish(theta, it, rejections, termination, trace, grad_norm=math.nan):
    circle = Circle(float(theta[0]), float(theta[1]), abs(float(theta[2])))
    return FitReport(circle, it, rejections, termination, 0, grad_norm, trace)


def _trace_row(it, theta, F, lam, event=""):
    return TraceRow(it, float(theta[0]), float(theta[1]), F, math.nan, lam, "",
                    "standard", event=event)


def gauss_newton_fit(
    data: NormalizedPointSet,
    init: Circle,
    cfg: BaselineConfig = GN_CONFIG,
    *,
    record_trace: bool = False,
) -> FitReport:
    """Gauss-Newton on ``(a, b, R)``, optionally with step halving.

    Without halving every full step is taken.  With halving a step is kept
    when the sum of squares does not grow by more than its rounding error,
    otherwise it is halved.  Iteration stops when the step
    falls below the stop rule's threshold (relative to ``max(|theta|, 1)``).
    """
    theta = np.array([init.a, init.b, init.R], dtype=float)
    thr = cfg.stop_rule.threshold
    trace = [] if record_trace else None
    rejections = 0
    it = 0
    while it < cfg.max_iters:
        it += 1
        res, r, J = _current(data, theta)
        F, _ = _objective(res, r, theta[2])
        if trace is not None and it == 1:
            trace.append(_trace_row(0, theta, F, 0.0))
        h = np.linalg.lstsq(J, -res, rcond=None)[0]
        for _ in range(cfg.max_halvings if cfg.step_halving else 1):
            if _stopped(h, theta, thr):
                return _finish(theta, it, rejections, cfg.stop_rule.termination, trace)
            cand = theta + h
            out = _residuals(data, cand)
            if out is not None:
                F_new, tol = _objective(out[0], out[1], cand[2])
                if F_new <= F + tol or not cfg.step_halving:
                    break
            h = 0.5 * h
            rejections += 1
        else:
            return _finish(theta, it, rejections, cfg.stop_rule.termination, trace)
        theta = cand
        if trace is not None:
            trace.append(_trace_row(it, theta, F_new, 0.0))
        if math.hypot(theta[0], theta[1]) > cfg.divergence_box:
            return _finish(theta, it, rejections, Termination.DIVERGED, trace)
        if _stopped(h, theta, thr):
            return _finish(theta, it, rejections, cfg.stop_rule.termination, trace)
    return _finish(theta, it, rejections, Termination.MAX_ITERS, trace)


def lm_classic_fit(
    data: NormalizedPointSet,
    init: Circle,
    cfg: BaselineConfig = LM_CONFIG,
    *,
    record_trace: bool = False,
) -> FitReport:
    """Levenberg-Marquardt on ``(a, b, R)`` with ``J^T J + lam I`` damping.

    A step is accepted only if the sum of squares strictly decreases; the
    iteration stops once a trial step is below the stop rule's threshold.
    """
    theta = np.array([init.a, init.b, init.R], dtype=float)
    thr = cfg.stop_rule.threshold
    lam = cfg.lambda_init
    trace = [] if record_trace else None
    rejections = 0
    it = 0
    eye = np.eye(3)
    while it < cfg.max_iters:
        it += 1
        res, r, J = _current(data, theta)
        F = float(res @ res)
        if trace is not None and it == 1:
            trace.append(_trace_row(0, theta, F, lam))
        JtJ = J.T @ J
        Jtr = J.T @ res
        for _ in range(cfg.max_inner_rejections):
            try:
                h = np.linalg.solve(JtJ + lam * eye, -Jtr)
            except np.linalg.LinAlgError:
                lam = lam * cfg.lambda_up if lam > 0 else cfg.lambda_init
                rejections += 1
                continue
            if _stopped(h, theta, thr):
                return _finish(theta, it, rejections, cfg.stop_rule.termination, trace)
            cand = theta + h
            out = _residuals(data, cand)
            if out is not None:
                F_new = float(out[0] @ out[0])
                if F_new < F:
                    lam *= cfg.lambda_down
                    break
            lam *= cfg.lambda_up
            rejections += 1
        else:
            return _finish(theta, it, rejections, cfg.stop_rule.termination, trace)
        theta = cand
        if trace is not None:
            trace.append(_trace_row(it, theta, F_new, lam))
        if math.hypot(theta[0], theta[1]) > cfg.divergence_box:
            return _finish(theta, it, rejections, Termination.DIVERGED, trace)
    return _finish(theta, it, rejections, Termination.MAX_ITERS, trace)
