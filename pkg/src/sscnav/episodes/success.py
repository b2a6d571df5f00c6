"""Stop checker and task-completion judgement."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..perception.sensor import SensorParams, cast_rays, ray_angles
from ..world.core import Pose, World
from .sampler import SUCCESS_DISTANCE

STOP_FRACTION = 0.03
N_ROTATIONS = 4


def proximity_sector_cells(sensor: SensorParams, resolution: float, proximity: float) -> float:
    """Cells inside one observation's field of view within ``proximity`` meters."""
    fov = min(math.radians(sensor.fov_deg), 2 * math.pi)
    return 0.5 * fov * min(proximity, sensor.range_m) ** 2 / resolution ** 2


def stop_threshold(sensor: SensorParams, resolution: float, proximity: float = SUCCESS_DISTANCE,
                   fraction: float = STOP_FRACTION) -> int:
    """Target cells an observation must show within ``proximity`` to trigger a stop.

    A fraction of the most cells one observation can contain inside the
    proximity gate; never below one.
    """
    return max(1, math.ceil(fraction * proximity_sector_cells(sensor, resolution, proximity)))


@dataclass(frozen=True)
class StopParams:
    proximity: float = SUCCESS_DISTANCE
    fraction: float = STOP_FRACTION
    threshold: int | None = None  # overrides ``fraction`` when set

    def tau(self, sensor: SensorParams, resolution: float) -> int:
        if self.threshold is not None:
            return self.threshold
        return stop_threshold(sensor, resolution, self.proximity, self.fraction)


def rotation_views(w: World, pose: Pose, sensor: SensorParams, reach: float,
                   rng: np.random.Generator | None = None):
    """Cells and labels of the four observations at quarter-turn offsets."""
    fov = math.radians(sensor.fov_deg)
    angles, groups = [], []
    for k in range(N_ROTATIONS):
        a = ray_angles(pose.heading + k * math.pi / 2, fov, sensor.n_rays)
        angles.append(a)
        groups.append(np.full(len(a), k))
    per_view = cast_rays(w.opaque, w.resolution, pose.x, pose.y, np.concatenate(angles), reach,
                         np.concatenate(groups))
    out = []
    for cells in per_view:
        labels = w.labels[cells[:, 0], cells[:, 1]]
        if sensor.p_noise > 0:
            if rng is None:
                raise ValueError("label noise needs an rng")
            flip = rng.random(len(labels)) < sensor.p_noise
            labels = labels.copy()
            labels[flip] = rng.integers(0, w.n_categories, int(flip.sum()))
        out.append((cells, labels))
    return out


def stop_check(w: World, pose: Pose, goal: int, sensor: SensorParams | None = None,
               params: StopParams | None = None, rng: np.random.Generator | None = None) -> bool:
    """True iff one of four quarter-turn observations shows at least tau goal cells within range."""
    sensor = sensor or SensorParams()
    params = params or StopParams()
    tau = params.tau(sensor, w.resolution)
    # rays run a little past the gate so every cell whose center is inside it is reached
    reach = min(params.proximity + w.resolution, sensor.range_m)
    for cells, labels in rotation_views(w, pose, sensor, reach, rng):
        cx = (cells[:, 1] + 0.5) * w.resolution
        cy = (cells[:, 0] + 0.5) * w.resolution
        near = np.hypot(cx - pose.x, cy - pose.y) <= params.proximity
        if int(np.count_nonzero(near & (labels == goal))) >= tau:
            return True
    return False


def footprint_distance(w: World, pose: Pose, k: int) -> float:
    """Euclidean meters from the agent to the nearest point of instance ``k``'s cells."""
    fp = w.objects[k].footprint
    res = w.resolution
    x0, y0 = fp[:, 1] * res, fp[:, 0] * res
    dx = np.maximum(np.maximum(x0 - pose.x, 0.0), pose.x - (x0 + res))
    dy = np.maximum(np.maximum(y0 - pose.y, 0.0), pose.y - (y0 + res))
    return float(np.hypot(dx, dy).min())


def visible_cells_360(w: World, pose: Pose, sensor: SensorParams | None = None) -> np.ndarray:
    sensor = sensor or SensorParams()
    n = N_ROTATIONS * sensor.n_rays
    angles = ray_angles(pose.heading, 2 * math.pi, n)
    return cast_rays(w.opaque, w.resolution, pose.x, pose.y, angles, sensor.range_m)


def adjudicate_success(w: World, pose: Pose, goal: int, stopped: bool,
                       sensor: SensorParams | None = None,
                       proximity: float = SUCCESS_DISTANCE) -> bool:
    """Stopped, within ``proximity`` of a goal instance, and that instance is in sight."""
    if not stopped:
        return False
    near = [k for k in w.instances_of(goal) if footprint_distance(w, pose, k) <= proximity]
    if not near:
        return False
    seen = np.zeros(w.shape, dtype=bool)
    vis = visible_cells_360(w, pose, sensor)
    seen[vis[:, 0], vis[:, 1]] = True
    return any(seen[w.objects[k].footprint[:, 0], w.objects[k].footprint[:, 1]].any() for k in near)
