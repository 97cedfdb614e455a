import math

import numpy as np
import pytest

from circlefit import (
    CenterOnDataPoint, CenterTooClose, evaluate, evaluate_big_circle,
    evaluate_standard, fit_circle, normalize,
)
from circlefit.bigcircle import D_SWITCH, big_circle_intermediates
from circlefit.oracle import dd_objective
from circlefit.standard import BIG_CIRCLE, STANDARD

from conftest import random_pair, rel_err


@pytest.mark.parametrize("t", [1.5, 3.0, 7.0])
def test_agrees_with_standard(rng, t):
    for _ in range(30):
        data, p = random_pair(rng, d_lo=t, d_hi=t)
        s = evaluate_standard(data, p)
        b = evaluate_big_circle(data, p, min_distance=0.0)
        assert math.isclose(s.value, b.value, rel_tol=1e-10)
        assert rel_err(b.gradient, s.gradient) < 1e-9
        assert rel_err(b.hessian, s.hessian) < 1e-9


def test_distance_identities(rng):
    data, p = random_pair(rng, d_lo=3, d_hi=5)
    it = big_circle_intermediates(data, p)
    r = np.hypot(data.x - p[0], data.y - p[1])
    assert np.allclose(r, it.D * it.w, rtol=1e-14)
    assert np.allclose(r - it.D, it.gamma, rtol=1e-12, atol=1e-14)
    assert math.isclose(math.cos(it.theta), it.c, rel_tol=1e-14, abs_tol=1e-15)


def test_dispatch_boundary(triangle):
    assert evaluate(triangle, (D_SWITCH, 0.0)).evaluator_used == BIG_CIRCLE
    assert evaluate(triangle, (np.nextafter(D_SWITCH, 0.0), 0.0)).evaluator_used == STANDARD


def test_min_distance_guard(triangle):
    with pytest.raises(CenterTooClose):
        evaluate_big_circle(triangle, (0.5, 0.5))
    with pytest.raises(CenterTooClose):
        evaluate_big_circle(triangle, (0.0, 0.0), min_distance=0.0)


def test_center_on_data_point(rng):
    data = normalize(np.vstack([[[3.0, 0.0]], rng.uniform(-1, 1, size=(5, 2))]))
    with pytest.raises(CenterOnDataPoint):
        evaluate_big_circle(data, (float(data.x[0]), float(data.y[0])), min_distance=0.0)


def _huge_arc(R=1e6, n=9):
    x = np.linspace(-1.0, 1.0, n)
    # sagitta without cancellation
    y = x * x / (R + np.sqrt(R * R - x * x))
    return np.c_[x, y]


def test_value_accurate_far_away():
    data = normalize(_huge_arc())
    b0 = -data.transform.y_mean / data.transform.scale
    p = (0.0, b0 + 1e6 / data.transform.scale)
    ref = float(dd_objective(data, p))
    big = evaluate_big_circle(data, p).value
    std = evaluate_standard(data, p).value
    assert abs(big - ref) <= 1e-9 * abs(ref)
    assert abs(std - ref) > 1e-6 * abs(ref)


def test_fit_recovers_huge_circle():
    rep = fit_circle(_huge_arc())
    c = rep.result
    assert rep.converged
    assert abs(c.a) < 1e-3
    assert math.isclose(c.R, 1e6, rel_tol=1e-6)
    assert math.isclose(c.b, 1e6, rel_tol=1e-6)
