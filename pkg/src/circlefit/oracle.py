"""Extended-precision reference fit and the accuracy-digit score."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

from .ddouble import DD
from .errors import NoConvergence
from .geometry import Circle, NormalizedPointSet

GRAD_TOL = 1e-28
STEP_TOL = 1e-30
MAX_ITERS = 50
K_MAX = 16
SUPERACCURATE_K = 15


@dataclass(frozen=True)
class DDCircle:
    a: DD
    b: DD
    R: DD
    grad_norm: float = 0.0
    iterations: int = 0

    def to_circle(self) -> Circle:
        return Circle(float(self.a), float(self.b), float(self.R))


def _dd_points(data: NormalizedPointSet):
    return [DD(v) for v in data.x.tolist()], [DD(v) for v in data.y.tolist()]


def _mean(values, n):
    total = DD()
    for v in values:
        total = total + v
    return total / n


def dd_objective(data: NormalizedPointSet, p: Sequence) -> DD:
    """Reduced objective ``a**2 + b**2 - rbar**2`` evaluated in double-double."""
    a = p[0] if isinstance(p[0], DD) else DD(float(p[0]))
    b = p[1] if isinstance(p[1], DD) else DD(float(p[1]))
    xs, ys = _dd_points(data)
    rbar = _mean([((x - a) * (x - a) + (y - b) * (y - b)).sqrt() for x, y in zip(xs, ys)],
                 len(xs))
    return a * a + b * b - rbar * rbar


def _newton_terms(xs, ys, a: DD, b: DD):
    """Half-gradient, half-Hessian entries and rbar at (a, b)."""
    n = len(xs)
    rs, us, vs, uur, vvr, uvr = [], [], [], [], [], []
    for x, y in zip(xs, ys):
        dx = x - a
        dy = y - b
        r = (dx * dx + dy * dy).sqrt()
        u = dx / r
        v = dy / r
        rs.append(r)
        us.append(u)
        vs.append(v)
        uur.append(u * u / r)
        vvr.append(v * v / r)
        uvr.append(u * v / r)
    rbar, ubar, vbar = _mean(rs, n), _mean(us, n), _mean(vs, n)
    g1 = a + ubar * rbar
    g2 = b + vbar * rbar
    h11 = 1 - ubar * ubar - rbar * _mean(vvr, n)
    h12 = rbar * _mean(uvr, n) - ubar * vbar
    h22 = 1 - vbar * vbar - rbar * _mean(uur, n)
    return g1, g2, h11, h12, h22, rbar


def oracle_fit(data: NormalizedPointSet, seed: Union[Circle, Sequence[float]],
               grad_tol: float = GRAD_TOL, max_iters: int = MAX_ITERS) -> DDCircle:
    """Refine a converged double-precision fit with full Newton in double-double.

    Converged when the (full) gradient norm is below ``grad_tol * max(1, |p|)``
    and the Newton step has reached the double-double noise floor: either
    below ``STEP_TOL * max(1, |p|)`` or no longer shrinking.  The gradient test
    alone is not enough on ill-conditioned samples, where a tiny gradient still
    allows a sizeable error along the flat direction.  Raises NoConvergence
    after ``max_iters`` iterations.
    """
    if isinstance(seed, Circle):
        a, b = DD(seed.a), DD(seed.b)
    elif isinstance(seed, DDCircle):
        a, b = seed.a, seed.b
    else:
        a, b = (v if isinstance(v, DD) else DD(float(v)) for v in seed)
    xs, ys = _dd_points(data)
    D = max(1.0, math.hypot(float(a), float(b)))
    prev_step = math.inf
    for it in range(1, max_iters + 1):
        g1, g2, h11, h12, h22, rbar = _newton_terms(xs, ys, a, b)
        gnorm = 2.0 * math.hypot(float(g1), float(g2))
        det = h11 * h22 - h12 * h12
        da = (h22 * g1 - h12 * g2) / det
        db = (h11 * g2 - h12 * g1) / det
        step_norm = math.hypot(float(da), float(db))
        if gnorm < grad_tol * D and (step_norm < STEP_TOL * D or step_norm > 0.5 * prev_step):
            return DDCircle(a, b, rbar, gnorm, it - 1)
        a = a - da
        b = b - db
        prev_step = step_norm
    raise NoConvergence(f"gradient norm {gnorm:.3g} after {max_iters} double-double iterations")


@dataclass(frozen=True)
class AccuracyScore:
    E: float
    k: int

    @property
    def superaccurate(self) -> bool:
        return self.k >= SUPERACCURATE_K


def digits_from_error(E: float) -> int:
    """``floor(-log10(E))`` clamped to ``[0, 16]``; ``E == 0`` gives 16."""
    if E <= 0.0:
        return K_MAX
    if not math.isfinite(E):
        return 0
    return int(min(K_MAX, max(0, math.floor(-math.log10(E)))))


def relative_error(estimate: Circle, oracle: Union[DDCircle, Circle]) -> float:
    """``|est - ref| / max(|ref|, 1)`` over ``(a, b, R)``; differences in double-double."""
    if isinstance(oracle, Circle):
        oracle = DDCircle(DD(oracle.a), DD(oracle.b), DD(oracle.R))
    diffs = [DD(e) - o for e, o in ((estimate.a, oracle.a), (estimate.b, oracle.b),
                                    (estimate.R, oracle.R))]
    num = math.sqrt(sum(float(d * d) for d in diffs))
    ref = math.sqrt(sum(float(o * o) for o in (oracle.a, oracle.b, oracle.R)))
    return num / max(ref, 1.0)


def score(estimate: Circle, oracle: Union[DDCircle, Circle]) -> AccuracyScore:
    E = relative_error(estimate, oracle)
    return AccuracyScore(E, digits_from_error(E))
