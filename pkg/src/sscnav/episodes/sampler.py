"""Legal episode starts."""

from __future__ import annotations

import math

import numpy as np

from ..errors import GenerationError, NotFoundError
from ..world.categories import TARGET_CATEGORIES, VALID_ROOM_TYPES
from ..world.core import Pose, World
from ..world.geodesic import adjacent_cells, distance_field, target_field
from .types import EpisodeSpec

SUCCESS_DISTANCE = 1.0
TRIALS = 100
REPEATS = 10


def target_labels(w: World) -> list[int]:
    """Goal categories with at least one instance in ``w``."""
    return [w.label_index(c) for c in TARGET_CATEGORIES
            if c in w.categories and w.instances_of(w.label_index(c))]


def _instance_field(w: World, k: int) -> np.ndarray:
    cache = w._cache.setdefault("instance_fields", {})
    if k not in cache:
        cache[k] = distance_field(w, adjacent_cells(w, w.objects[k]))
    return cache[k]


def _valid_room_mask(w: World) -> np.ndarray:
    if "valid_room" not in w._cache:
        valid = np.array([r.room_type in VALID_ROOM_TYPES for r in w.rooms] + [False])
        w._cache["valid_room"] = w.navigable & valid[w.room_ids.astype(np.int64)]
    return w._cache["valid_room"]


def legal_start_mask(w: World, goal: int, d_succ: float = SUCCESS_DISTANCE) -> np.ndarray:
    """Cells that are navigable, inside a valid room, and clear of every goal instance.

    Clearance from instance k means both the Euclidean distance to its
    centroid and the geodesic distance to it exceed ``r_k + d_succ``.
    """
    mask = _valid_room_mask(w).copy()
    h, wd = w.shape
    ys = (np.arange(h)[:, None] + 0.5) * w.resolution
    xs = (np.arange(wd)[None, :] + 0.5) * w.resolution
    for k in w.instances_of(goal):
        o = w.objects[k]
        clear = o.radius + d_succ
        mask &= np.hypot(xs - o.centroid[0], ys - o.centroid[1]) > clear
        mask &= _instance_field(w, k) > clear
    return mask


def is_legal_start(w: World, x: float, y: float, goal: int, d_succ: float = SUCCESS_DISTANCE) -> bool:
    r, c = w.cell_of(x, y)
    return w.in_bounds(r, c) and bool(legal_start_mask(w, goal, d_succ)[r, c])


def _draw_start(w: World, goal: int, rng: np.random.Generator, d_succ: float,
                trials: int, repeats: int):
    candidates = np.argwhere(_valid_room_mask(w))
    if len(candidates) == 0:
        return None
    legal = legal_start_mask(w, goal, d_succ)
    for _ in range(repeats):
        picks = candidates[rng.integers(len(candidates), size=trials)]
        ok = legal[picks[:, 0], picks[:, 1]]
        if ok.any():
            return tuple(int(v) for v in picks[int(np.argmax(ok))])
    return None


def sample_episode(worlds, rng: np.random.Generator, d_succ: float = SUCCESS_DISTANCE,
                   trials: int = TRIALS, repeats: int = REPEATS, episode_id: int = 0,
                   max_worlds: int = 100) -> EpisodeSpec:
    """Random world, goal present in it, and a legal start with uniform heading.

    Starts are drawn in rounds of ``trials`` uniform navigable valid-room
    cells; after ``repeats`` failed rounds the world is rejected and another
    one is drawn. Worlds without any goal-category instance are skipped.
    """
    worlds = list(worlds)
    if not worlds:
        raise ValueError("no worlds")
    for _ in range(max_worlds):
        w = worlds[int(rng.integers(len(worlds)))]
        goals = target_labels(w)
        if not goals:
            continue
        g = goals[int(rng.integers(len(goals)))]
        cell = _draw_start(w, g, rng, d_succ, trials, repeats)
        if cell is None:
            continue
        x, y = w.cell_center(*cell)
        l = float(target_field(w, g)[cell])
        if not math.isfinite(l):
            continue
        return EpisodeSpec(w.seed, Pose(x, y, float(rng.uniform(0, 2 * math.pi))), g, l, episode_id)
    raise GenerationError("no world admits a legal episode start")


def sample_episodes(worlds, n: int, rng: np.random.Generator, **kw) -> list[EpisodeSpec]:
    return [sample_episode(worlds, rng, episode_id=i, **kw) for i in range(n)]


def shortest_path(w: World, pose: Pose, goal: int) -> float:
    if not w.instances_of(goal):
        raise NotFoundError(f"no instance of category {goal}")
    return float(target_field(w, goal)[w.cell_of(pose.x, pose.y)])
