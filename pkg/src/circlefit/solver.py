"""Damped full-Newton minimization of the reduced circle objective.

Each outer iteration eigendecomposes the exact Hessian, picks a damping
``lam`` no smaller than the bound that keeps the step inside
``h_max = alpha1*|p| + alpha0``, and retries with larger damping until the
candidate is accepted.  Far from the minimum a candidate must lower F
(phase AR1).  Once ``|grad F| < eps_star`` the comparison of F values is
swamped by round-off, so from then on a candidate must lower ``|grad F|``
instead (phase AR2), and the damping is reset to zero every iteration so the
tail converges quadratically down to machine precision.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

import numpy as np

from .bigcircle import evaluate
from .errors import AmbiguousValley, CenterOnDataPoint, DegenerateInput, SingularDamping
from .geometry import (
    Circle,
    FitResult,
    Line,
    NormalizationTransform,
    NormalizedPointSet,
    denormalize,
    normalize,
    radius_for_center,
)
from .linalg import Eigen2x2, eig_sym_2x2
from .valley import (
    L_BOX,
    MAX_RESTARTS,
    LineFallback,
    RestartAt,
    ValleyGuard,
    build_valley_frame,
    line_fit,
)

AR1 = "AR1"
AR2 = "AR2"
EPS = float(np.finfo(float).eps)


class Termination(str, enum.Enum):
    STEP_BELOW_EPS = "StepBelowEps"
    STEP_BELOW_SQRT_EPS = "StepBelowSqrtEps"
    MAX_ITERS = "MaxIters"
    LINE_FALLBACK = "LineFallback"
    DIVERGED = "Diverged"


@dataclass(frozen=True)
class SolverConfig:
    eps_star: float = 3e-8
    alpha0: float = 0.1
    alpha1: float = 0.1
    lambda_init: float = 1e-3
    lambda_up: float = 10.0
    lambda_down: float = 0.1
    max_outer_iters: int = 200
    max_inner_rejections: int = 50
    machine_eps: float = EPS
    L: float = L_BOX
    max_restarts: int = MAX_RESTARTS

    def __post_init__(self):
        if not (0 < self.alpha0 < 1 and 0 < self.alpha1 < 1):
            raise ValueError("alpha0 and alpha1 must lie in (0, 1)")
        if not (self.lambda_up > 1 > self.lambda_down > 0):
            raise ValueError("need lambda_up > 1 > lambda_down > 0")
        if not self.eps_star > 0:
            raise ValueError("eps_star must be positive")


@dataclass(frozen=True)
class TraceRow:
    """One accepted iterate (row 0 is the starting point)."""

    iteration: int
    a: float
    b: float
    F: float
    grad_norm: float
    lam: float
    phase: str
    evaluator: str
    step_norm: float = 0.0
    h_max: float = math.inf
    event: str = ""

    CSV_FIELDS = ("iter", "a", "b", "F", "grad_norm", "lambda", "phase", "evaluator")

    def csv_row(self) -> tuple:
        nums = (self.a, self.b, self.F, self.grad_norm, self.lam)
        return (self.iteration, *(repr(float(v)) for v in nums), self.phase, self.evaluator)


@dataclass
class FitReport:
    result: FitResult
    iterations: int
    inner_rejections: int
    termination: Termination
    restarts: int = 0
    final_gradient_norm: float = math.nan
    trace: Optional[List[TraceRow]] = None
    normalized: Optional[FitResult] = None
    transform: Optional[NormalizationTransform] = None

    @property
    def converged(self) -> bool:
        return self.termination in (Termination.STEP_BELOW_EPS,
                                    Termination.STEP_BELOW_SQRT_EPS)


def lambda_min(g: Sequence[float], d1: float, d2: float, h_max: float) -> float:
    """Smallest damping keeping each eigen-component of the step within ``h_max``."""
    return max(abs(g[0]) / h_max - d1, abs(g[1]) / h_max - d2)


def step(eig: Eigen2x2, grad: Sequence[float], lam: float) -> np.ndarray:
    """``h = -Q diag(1/(d1+lam), 1/(d2+lam)) Q^T grad``."""
    e1 = eig.d1 + lam
    e2 = eig.d2 + lam
    if e1 <= 0 or e2 <= 0:
        raise SingularDamping(f"damped eigenvalues ({e1}, {e2}) not positive")
    g = eig.Q.T @ np.asarray(grad, dtype=float)
    return -(eig.Q @ np.array([g[0] / e1, g[1] / e2]))


def fit(
    data: NormalizedPointSet,
    p0: Sequence[float],
    cfg: SolverConfig = SolverConfig(),
    *,
    record_trace: bool = False,
) -> FitReport:
    """Minimize the reduced objective on normalized data starting from center ``p0``.

    Returns a report whose ``result`` is a normalized-frame :class:`Circle`
    (center at the final iterate, radius = mean distance) or, when the valley
    guard finds no circle exists, a :class:`Line`.
    """
    p = np.array(p0, dtype=float)
    if p.shape != (2,) or not np.all(np.isfinite(p)):
        raise ValueError(f"initial center must be two finite numbers, got {p0!r}")

    eps = cfg.machine_eps
    guard = ValleyGuard(data, cfg.L)
    cur = evaluate(data, p)
    phase = AR1
    lam = cfg.lambda_init
    restarts = 0
    total_rejections = 0
    iterations = 0
    trace: Optional[List[TraceRow]] = [] if record_trace else None
    if trace is not None:
        trace.append(TraceRow(0, p[0], p[1], cur.value, cur.grad_norm, lam,
                              phase, cur.evaluator_used))

    def finish(termination: Termination, result: Optional[FitResult] = None) -> FitReport:
        if result is None:
            result = Circle(float(p[0]), float(p[1]), radius_for_center(data, p))
        return FitReport(result, iterations, total_rejections, termination, restarts,
                         cur.grad_norm, trace)

    while iterations < cfg.max_outer_iters:
        iterations += 1
        if phase == AR1 and cur.grad_norm < cfg.eps_star:
            phase = AR2
        eig = eig_sym_2x2(cur.hessian)
        g = eig.Q.T @ cur.gradient
        h_max = cfg.alpha1 * math.hypot(p[0], p[1]) + cfg.alpha0
        # lambda_min bounds the max-norm of the step in the eigenbasis;
        # shrinking by sqrt(2) makes it bound the Euclidean norm as well
        lam_min = lambda_min(g, eig.d1, eig.d2, h_max / math.sqrt(2.0))
        if phase == AR2:
            lam = 0.0

        accepted = False
        for _ in range(cfg.max_inner_rejections):
            lam = max(lam, lam_min)
            try:
                h = step(eig, cur.gradient, lam)
            except SingularDamping:
                lam = cfg.lambda_up * max(lam, cfg.lambda_init)
                total_rejections += 1
                continue
            h_norm = math.hypot(h[0], h[1])
            if h_norm < eps * max(math.hypot(p[0], p[1]), 1.0):
                return finish(Termination.STEP_BELOW_EPS)
            cand = p + h
            try:
                new = evaluate(data, cand)
            except CenterOnDataPoint:
                new = None
            if new is not None and (
                new.value < cur.value if phase == AR1 else new.grad_norm < cur.grad_norm
            ):
                p, cur = cand, new
                lam *= cfg.lambda_down
                accepted = True
                break
            total_rejections += 1
            if phase == AR1:
                lam = lam * cfg.lambda_up if lam > 0 else cfg.lambda_init * cfg.lambda_up
            else:
                lam = cfg.lambda_up * max(lam, cfg.lambda_init)

        if not accepted:
            return finish(Termination.MAX_ITERS)

        event = ""
        action = guard(p)
        if isinstance(action, LineFallback):
            return finish(Termination.LINE_FALLBACK, action.line)
        if isinstance(action, RestartAt) and restarts < cfg.max_restarts:
            restarts += 1
            p = np.array(action.center)
            cur = evaluate(data, p)
            lam = cfg.lambda_init
            event = "restart"
        if trace is not None:
            trace.append(TraceRow(iterations, p[0], p[1], cur.value, cur.grad_norm,
                                  lam, phase, cur.evaluator_used, h_norm, h_max, event))

    return finish(Termination.MAX_ITERS)


def kasa_center(data: NormalizedPointSet) -> tuple[float, float]:
    from .baselines import kasa_fit

    c = kasa_fit(data)
    return (c.a, c.b)


def default_start(data: NormalizedPointSet, L: float = L_BOX) -> Union[tuple, Line]:
    """Kasa center, or for nearly collinear data the guard's restart point.

    Returns the best line when the data give no preferred side.
    """
    try:
        return kasa_center(data)
    except DegenerateInput:
        pass
    try:
        frame = build_valley_frame(data)
    except AmbiguousValley:
        return line_fit(data)
    a, b = frame.from_frame((0.0, frame.Z * L))
    return (float(a), float(b))


def fit_circle(
    points,
    *,
    init: Optional[Sequence[float]] = None,
    cfg: SolverConfig = SolverConfig(),
    record_trace: bool = False,
) -> FitReport:
    """Fit a circle to raw ``(n, 2)`` points.

    ``init`` is an optional raw-frame starting center; by default the
    start comes from :func:`default_start`.  Collinear data yield a :class:`Line`.
    The returned ``result`` is in the raw frame; ``normalized`` holds the
    same result in the centered, scaled frame.
    """
    data = normalize(points)
    t = data.transform
    if init is None:
        p0 = default_start(data, cfg.L)
        if isinstance(p0, Line):
            return FitReport(denormalize(p0, t), 0, 0, Termination.LINE_FALLBACK,
                             normalized=p0, transform=t)
    else:
        p0 = ((init[0] - t.x_mean) / t.scale, (init[1] - t.y_mean) / t.scale)
    report = fit(data, p0, cfg, record_trace=record_trace)
    report.normalized = report.result
    report.result = denormalize(report.result, t)
    report.transform = t
    return report


__all__ = [
    "AR1",
    "AR2",
    "FitReport",
    "SolverConfig",
    "Termination",
    "TraceRow",
    "default_start",
    "fit",
    "fit_circle",
    "lambda_min",
    "step",
]
