"""Closed-form eigendecomposition of symmetric 2x2 matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class Eigen2x2:
    """``H = Q @ diag(d1, d2) @ Q.T`` with ``d1 >= d2``; columns of Q are eigenvectors."""

    d1: float
    d2: float
    Q: np.ndarray

    @property
    def major(self) -> np.ndarray:
        return self.Q[:, 0]

    @property
    def minor(self) -> np.ndarray:
        return self.Q[:, 1]


def eig_sym_2x2(H) -> Eigen2x2:
    """Eigenvalues and orthonormal eigenvectors of ``[[p, q], [q, r]]``.

    Uses a single Jacobi rotation: ``t = tan(phi)`` is the smaller root of
    ``t**2 + 2*zeta*t - 1 = 0`` with ``zeta = (r - p) / (2q)``, which keeps the
    rotation well conditioned and the eigenvectors orthogonal to rounding.
    Ties (``q == 0`` and ``p == r``) return ``Q = I``.
    """
    p = float(H[0][0])
    q = float(H[0][1])
    r = float(H[1][1])
    if q == 0.0:
        if p >= r:
            return Eigen2x2(p, r, np.eye(2))
        return Eigen2x2(r, p, np.array([[0.0, 1.0], [1.0, 0.0]]))

    zeta = (r - p) / (2.0 * q)
    if abs(zeta) > 1e150:
        t = 0.5 / zeta
    else:
        t = math.copysign(1.0, zeta) / (abs(zeta) + math.hypot(1.0, zeta))
    c = 1.0 / math.hypot(1.0, t)
    s = t * c
    e1 = p - t * q  # eigenvector (c, -s)
    e2 = r + t * q  # eigenvector (s, c)
    if e1 >= e2:
        return Eigen2x2(e1, e2, np.array([[c, s], [-s, c]]))
    return Eigen2x2(e2, e1, np.array([[s, c], [c, -s]]))
