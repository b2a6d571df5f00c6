from __future__ import annotations

import math

import numpy as np

from .core import Pose, World


def sweep(w: World, pose: Pose, heading: float, length: float, substeps: int = 8) -> tuple[Pose, float]:
    """Move from ``pose`` along ``heading`` for up to ``length`` meters.

    The segment is sampled every ``resolution / substeps`` meters and motion
    stops at the last sample before the first non-navigable (or out-of-world)
    cell. Returns the new pose, facing ``heading``, and the distance covered.
    """
    if length <= 0:
        return Pose(pose.x, pose.y, heading), 0.0
    n = max(1, int(math.ceil(length / (w.resolution / substeps))))
    t = np.arange(1, n + 1) / n * length
    xs = pose.x + t * math.cos(heading)
    ys = pose.y + t * math.sin(heading)
    rows = np.floor(ys / w.resolution).astype(np.int64)
    cols = np.floor(xs / w.resolution).astype(np.int64)
    H, W = w.shape
    ok = (rows >= 0) & (rows < H) & (cols >= 0) & (cols < W)
    ok[ok] = w.navigable[rows[ok], cols[ok]]
    bad = np.flatnonzero(~ok)
    k = int(bad[0]) if len(bad) else n
    if k == 0:
        return Pose(pose.x, pose.y, heading), 0.0
    return Pose(float(xs[k - 1]), float(ys[k - 1]), heading), float(t[k - 1])


def wrap_angle(a: float) -> float:
    return (a + math.pi) % (2 * math.pi) - math.pi
