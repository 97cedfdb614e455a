import numpy as np
import pytest

from circlefit import normalize


def random_pair(rng, n=8, d_lo=0.0, d_hi=2.0):
    """A normalized n-point sample and a center at distance in [d_lo, d_hi]."""
    data = normalize(rng.uniform(-1, 1, size=(n, 2)))
    phi = rng.uniform(0, 2 * np.pi)
    D = rng.uniform(d_lo, d_hi)
    return data, (D * np.cos(phi), D * np.sin(phi))


def rel_err(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return float(np.max(np.abs(x - y)) / max(np.max(np.abs(y)), 1e-300))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def triangle():
    return normalize([(0.0, 0.0), (2.0, 0.0), (1.0, 2.0)])


def circle_points(a, b, R, n, phase=0.0):
    t = phase + 2 * np.pi * np.arange(n) / n
    return np.c_[a + R * np.cos(t), b + R * np.sin(t)]
