"""2-D raycast sensor: a semantic stand-in for a depth camera plus segmentation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..world.core import Pose, World


@dataclass(frozen=True)
class SensorParams:
    fov_deg: float = 90.0
    range_m: float = 4.0
    n_rays: int = 240
    p_noise: float = 0.0


@dataclass
class EgoObservation:
    pose: Pose
    cells: np.ndarray  # (K, 2) int64 rows/cols, unique
    labels: np.ndarray  # (K,) uint8
    resolution: float
    world_shape: tuple[int, int]


def ray_angles(heading: float, fov: float, n_rays: int) -> np.ndarray:
    if fov >= 2 * math.pi - 1e-12:
        return heading + 2 * math.pi * np.arange(n_rays) / n_rays
    if n_rays == 1:
        return np.array([heading])
    return heading + np.linspace(-fov / 2, fov / 2, n_rays)


def cast_rays(opaque: np.ndarray, resolution: float, x: float, y: float,
              angles: np.ndarray, range_m: float, groups: np.ndarray | None = None):
    """Grid-DDA traversal of every ray in lockstep.

    Returns the unique (row, col) cells entered at ray distance <= ``range_m``,
    up to and including the first opaque cell on each ray. Rays stop at the
    world boundary. With ``groups`` (one small non-negative int per ray) a
    list of per-group cell arrays is returned instead.
    """
    H, W = opaque.shape
    px, py = x / resolution, y / resolution
    rng_c = range_m / resolution
    dx, dy = np.cos(angles), np.sin(angles)
    n = len(angles)
    cx = np.full(n, math.floor(px), dtype=np.int64)
    cy = np.full(n, math.floor(py), dtype=np.int64)
    step_x = np.where(dx > 0, 1, -1)
    step_y = np.where(dy > 0, 1, -1)
    with np.errstate(divide="ignore", invalid="ignore"):
        tdx = np.where(dx != 0, 1.0 / np.abs(dx), np.inf)
        tdy = np.where(dy != 0, 1.0 / np.abs(dy), np.inf)
        tmx = np.where(dx > 0, (cx + 1 - px) / dx, np.where(dx < 0, (px - cx) / -dx, np.inf))
        tmy = np.where(dy > 0, (cy + 1 - py) / dy, np.where(dy < 0, (py - cy) / -dy, np.inf))
    active = np.ones(n, dtype=bool)
    hits = []
    for _ in range(int(2 * rng_c) + 4):
        inside = (cx >= 0) & (cx < W) & (cy >= 0) & (cy < H)
        active &= inside
        if not active.any():
            break
        ry, rx = cy[active], cx[active]
        flat = ry * W + rx
        if groups is not None:
            flat = groups[active] * (H * W) + flat
        hits.append(flat)
        blocked = np.zeros(n, dtype=bool)
        blocked[active] = opaque[ry, rx]
        active &= ~blocked
        go_x = tmx < tmy
        t_enter = np.where(go_x, tmx, tmy)
        cx = np.where(go_x, cx + step_x, cx)
        cy = np.where(go_x, cy, cy + step_y)
        tmx = np.where(go_x, tmx + tdx, tmx)
        tmy = np.where(go_x, tmy, tmy + tdy)
        active &= t_enter <= rng_c
    flat = np.unique(np.concatenate(hits)) if hits else np.zeros(0, dtype=np.int64)
    if groups is None:
        return np.stack([flat // W, flat % W], axis=1)
    out = []
    g = flat // (H * W)
    for k in range(int(groups.max()) + 1 if len(groups) else 0):
        f = flat[g == k] % (H * W)
        out.append(np.stack([f // W, f % W], axis=1))
    return out


def raycast_observe(w: World, pose: Pose, sensor: SensorParams | None = None,
                    rng: np.random.Generator | None = None) -> EgoObservation:
    """Cells visible from ``pose`` with their labels.

    With ``sensor.p_noise > 0`` each visible label is replaced, with that
    probability, by a category drawn uniformly from the world's category set.
    """
    sensor = sensor or SensorParams()
    angles = ray_angles(pose.heading, math.radians(sensor.fov_deg), sensor.n_rays)
    cells = cast_rays(w.opaque, w.resolution, pose.x, pose.y, angles, sensor.range_m)
    labels = w.labels[cells[:, 0], cells[:, 1]].astype(np.uint8)
    if sensor.p_noise > 0:
        if rng is None:
            raise ValueError("label noise needs an rng")
        flip = rng.random(len(labels)) < sensor.p_noise
        labels = labels.copy()
        labels[flip] = rng.integers(0, w.n_categories, int(flip.sum()))
    return EgoObservation(pose, cells, labels, w.resolution, w.shape)
