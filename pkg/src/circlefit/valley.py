"""Wrong-valley detection, restart, and the line fallback.

Far from the data the reduced objective has two valleys running along the
minor axis of the point cloud.  One descends toward the minimum, the other
descends forever.  Once the iterate leaves the box ``|a|, |b| <= L`` we rotate
into the principal frame of the scatter matrix, where the sign of
``mean(x**2 * y)`` tells which half-plane holds the bad valley, and restart
from ``(0, Z*L)`` in the good one.  When that sign is lost in round-off no
best circle exists and the best line is returned instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import AmbiguousValley
from .geometry import Line, NormalizedPointSet
from .linalg import eig_sym_2x2

L_BOX = 100.0
XXY_FLOOR = 1e-12
MAX_RESTARTS = 2


def scatter_matrix(data: NormalizedPointSet) -> np.ndarray:
    return np.array([[data.xx, data.xy], [data.xy, data.yy]])


def principal_rotation(data: NormalizedPointSet) -> np.ndarray:
    """Rotation whose first column is the major eigenvector of the scatter matrix."""
    eig = eig_sym_2x2(scatter_matrix(data))
    rot = eig.Q.copy()
    # keep a proper rotation so rotated coordinates are not mirrored
    if np.linalg.det(rot) < 0:
        rot[:, 1] = -rot[:, 1]
    return rot


@dataclass(frozen=True, eq=False)
class ValleyFrame:
    rotation: np.ndarray
    Z: int
    xxy: float

    def to_frame(self, p: Sequence[float]) -> np.ndarray:
        return self.rotation.T @ np.asarray(p, dtype=float)

    def from_frame(self, q: Sequence[float]) -> np.ndarray:
        return self.rotation @ np.asarray(q, dtype=float)


def build_valley_frame(
    data: NormalizedPointSet, xxy_floor: float = XXY_FLOOR
) -> ValleyFrame:
    """Principal frame of the data and the sign of its third moment there.

    Raises AmbiguousValley if ``|mean(x**2 * y)| <= xxy_floor`` in that frame.
    """
    rot = principal_rotation(data)
    xr = rot[0, 0] * data.x + rot[1, 0] * data.y
    yr = rot[0, 1] * data.x + rot[1, 1] * data.y
    xxy = float(np.mean(xr * xr * yr))
    if abs(xxy) <= xxy_floor:
        raise AmbiguousValley(f"|xxy| = {abs(xxy):.3g} is at round-off level")
    return ValleyFrame(rot, 1 if xxy > 0 else -1, xxy)


def line_fit(data: NormalizedPointSet) -> Line:
    """Line through the centroid along the major axis of the points."""
    d = principal_rotation(data)[:, 0]
    # canonical orientation: first nonzero component positive
    if d[0] < 0 or (d[0] == 0 and d[1] < 0):
        d = -d
    return Line((0.0, 0.0), (float(d[0]), float(d[1])))


@dataclass(frozen=True)
class Proceed:
    pass


@dataclass(frozen=True)
class RestartAt:
    center: tuple[float, float]


@dataclass(frozen=True)
class LineFallback:
    line: Line


GuardAction = Union[Proceed, RestartAt, LineFallback]


class ValleyGuard:
    """Per-fit guard; the valley frame is built lazily on the first trigger."""

    def __init__(self, data: NormalizedPointSet, L: float = L_BOX,
                 xxy_floor: float = XXY_FLOOR):
        self.data = data
        self.L = L
        self.xxy_floor = xxy_floor
        self.frame: Optional[ValleyFrame] = None
        self.ambiguous = False
        self.built = False
        self.frame_builds = 0

    def _ensure_frame(self):
        if self.built:
            return
        self.built = True
        self.frame_builds += 1
        try:
            self.frame = build_valley_frame(self.data, self.xxy_floor)
        except AmbiguousValley:
            self.ambiguous = True

    def __call__(self, p: Sequence[float]) -> GuardAction:
        if max(abs(p[0]), abs(p[1])) <= self.L:
            return Proceed()
        self._ensure_frame()
        if self.ambiguous:
            return LineFallback(line_fit(self.data))
        frame = self.frame
        _, b_rot = frame.to_frame(p)
        if frame.Z * b_rot < 0:
            a, b = frame.from_frame((0.0, frame.Z * self.L))
            return RestartAt((float(a), float(b)))
        return Proceed()


def guard(p: Sequence[float], data: NormalizedPointSet, L: float = L_BOX,
          xxy_floor: float = XXY_FLOOR) -> GuardAction:
    """One-shot form of :class:`ValleyGuard` (builds the frame if needed)."""
    return ValleyGuard(data, L, xxy_floor)(p)
