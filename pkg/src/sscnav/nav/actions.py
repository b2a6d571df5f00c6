"""Action selection and execution for spatial (pixel) and sparse 8-way actions."""

from __future__ import annotations

import math

import numpy as np

from ..perception.egomap import MapParams, agent_to_world
from ..world.core import Pose, World
from ..world.motion import sweep, wrap_angle

STEP_M = 0.25
COLLISION_M = 0.125
SPARSE_TURN = math.pi / 4
N_SPARSE = 8


def select_action(q: np.ndarray, eps: float, rng: np.random.Generator | None = None):
    """Epsilon-greedy choice over a Q map (pixel) or Q vector (index).

    Greedy ties resolve to the lowest row-major index. Returns ``(row, col)``
    for 2-D input and an int for 1-D input.
    """
    q = np.asarray(q)
    if eps > 0 and (rng is None):
        raise ValueError("exploration needs an rng")
    if eps > 0 and rng.random() < eps:
        flat = int(rng.integers(q.size))
    else:
        flat = int(np.argmax(q))  # first occurrence == lowest row-major index
    return tuple(int(v) for v in np.unravel_index(flat, q.shape)) if q.ndim == 2 else flat


def select_actions(q: np.ndarray, eps: float, rng: np.random.Generator | None = None) -> np.ndarray:
    """Batched flat action indices for (B, A) Q values."""
    q = np.asarray(q)
    greedy = np.argmax(q, axis=1)
    if eps <= 0:
        return greedy
    if rng is None:
        raise ValueError("exploration needs an rng")
    explore = rng.random(len(q)) < eps
    random = rng.integers(q.shape[1], size=len(q))
    return np.where(explore, random, greedy)


def pixel_target(pose: Pose, pixel, mp: MapParams) -> tuple[float, float]:
    """World point a map pixel stands for (its agent-side corner)."""
    i, j = pixel
    s = mp.cell_m
    x, y = agent_to_world(pose, (i - mp.size / 2) * s, (j - mp.size / 2) * s)
    return float(x), float(y)


def _turn(heading: float, delta: float) -> float:
    # a zero turn keeps the heading bit-identical
    return heading if delta == 0 else wrap_angle(heading + delta)


def _move(w: World, pose: Pose, heading: float, length: float, step_m: float, collision_m: float):
    new, moved = sweep(w, pose, heading, min(step_m, length))
    return new, moved, moved < collision_m


def execute_action(w: World, pose: Pose, pixel, mp: MapParams | None = None,
                   step_m: float = STEP_M, collision_m: float = COLLISION_M):
    """Turn toward the pixel's world point, then move up to ``step_m``.

    Returns ``(pose, step_length, collided)``. The agent's own pixel is a
    zero-length move that counts as a collision.
    """
    mp = mp or MapParams()
    i, j = pixel
    if not (0 <= i < mp.size and 0 <= j < mp.size):
        raise ValueError(f"pixel {pixel} outside a {mp.size}x{mp.size} map")
    fwd, right = (i - mp.size / 2) * mp.cell_m, (j - mp.size / 2) * mp.cell_m
    if fwd == 0 and right == 0:
        return Pose(pose.x, pose.y, pose.heading), 0.0, True
    # heading change: atan2 of the leftward offset over the forward offset
    heading = _turn(pose.heading, math.atan2(-right, fwd))
    return _move(w, pose, heading, math.hypot(fwd, right), step_m, collision_m)


def sparse8_execute(w: World, pose: Pose, k: int, step_m: float = STEP_M,
                    collision_m: float = COLLISION_M):
    """Turn right by ``k * 45`` degrees, then move forward up to ``step_m``."""
    if not 0 <= k < N_SPARSE:
        raise ValueError(f"sparse action {k} outside [0, {N_SPARSE})")
    heading = _turn(pose.heading, -k * SPARSE_TURN)
    return _move(w, pose, heading, math.inf, step_m, collision_m)


def execute_flat(w: World, pose: Pose, action: int, action_mode: str, mp: MapParams,
                 step_m: float = STEP_M, collision_m: float = COLLISION_M):
    """Dispatch a flat action index for either action mode."""
    if action_mode == "sparse8":
        return sparse8_execute(w, pose, int(action), step_m, collision_m)
    return execute_action(w, pose, divmod(int(action), mp.size), mp, step_m, collision_m)
