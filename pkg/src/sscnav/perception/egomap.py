"""Agent-centric semantic top-down maps.

Map frame: the agent sits at the corner shared by cells ``(R/2 - 1, R/2 - 1)``
and ``(R/2, R/2)``; increasing row is the agent's forward direction and
increasing column is to its right. Cell ``(i, j)`` covers agent-frame
forward offsets ``[(i - R/2) s, (i + 1 - R/2) s)`` and right offsets
``[(j - R/2) s, (j + 1 - R/2) s)`` with ``s = window / R``.

Projection is an inverse warp: each map cell looks up the world cell under
its center, so the map has no holes whatever the ratio of map to world
resolution.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from ..world.core import Pose, World
from .sensor import EgoObservation


@dataclass(frozen=True)
class MapParams:
    window_m: float = 6.0
    size: int = 128
    history: int = 5

    @property
    def cell_m(self) -> float:
        return self.window_m / self.size


@dataclass
class EgoSemMap:
    labels: np.ndarray  # (R, R) uint8, value n_categories marks unknown
    observed: np.ndarray  # (R, R) bool
    n_categories: int

    @property
    def unknown(self) -> int:
        return self.n_categories

    @property
    def size(self) -> int:
        return self.labels.shape[0]

    def one_hot(self, dtype=np.float32) -> np.ndarray:
        """(N + 1, R, R) one-hot encoding; channel N is the unknown channel."""
        out = np.zeros((self.n_categories + 1,) + self.labels.shape, dtype=dtype)
        np.put_along_axis(out, self.labels[None].astype(np.int64), 1, axis=0)
        return out

    def check(self) -> None:
        if not np.array_equal(self.labels == self.unknown, ~self.observed):
            raise AssertionError("unknown channel and observed mask disagree")

    def __eq__(self, other):
        return (isinstance(other, EgoSemMap) and self.n_categories == other.n_categories
                and np.array_equal(self.labels, other.labels)
                and np.array_equal(self.observed, other.observed))


class ObservationHistory:
    """The last ``maxlen`` observations, oldest first."""

    def __init__(self, maxlen: int = 5):
        self._buf: deque[EgoObservation] = deque(maxlen=maxlen)

    def push(self, obs: EgoObservation) -> None:
        self._buf.append(obs)

    def clear(self) -> None:
        self._buf.clear()

    def __len__(self):
        return len(self._buf)

    def __iter__(self):
        return iter(self._buf)

    def __getitem__(self, k):
        return self._buf[k]

    @property
    def latest(self) -> EgoObservation:
        return self._buf[-1]


_OFFSETS_CACHE: dict = {}


def _agent_offsets(mp: MapParams):
    """Forward/right offsets (meters) of every map-cell center."""
    key = (mp.size, mp.window_m)
    if key not in _OFFSETS_CACHE:
        c = (np.arange(mp.size) + 0.5 - mp.size / 2) * mp.cell_m
        fwd, right = np.meshgrid(c, c, indexing="ij")
        _OFFSETS_CACHE[key] = (fwd, right)
    return _OFFSETS_CACHE[key]


def map_cells_to_world(pose: Pose, mp: MapParams, resolution: float):
    """World (row, col) under the center of every map cell."""
    fwd, right = _agent_offsets(mp)
    ch, sh = math.cos(pose.heading), math.sin(pose.heading)
    x = pose.x + fwd * ch + right * sh
    y = pose.y + fwd * sh - right * ch
    return np.floor(y / resolution).astype(np.int64), np.floor(x / resolution).astype(np.int64)


def world_to_agent(pose: Pose, x, y):
    """World points to agent-frame (forward, right) meters."""
    dx, dy = np.asarray(x) - pose.x, np.asarray(y) - pose.y
    ch, sh = math.cos(pose.heading), math.sin(pose.heading)
    return dx * ch + dy * sh, dx * sh - dy * ch


def agent_to_world(pose: Pose, fwd, right):
    ch, sh = math.cos(pose.heading), math.sin(pose.heading)
    fwd, right = np.asarray(fwd), np.asarray(right)
    return pose.x + fwd * ch + right * sh, pose.y + fwd * sh - right * ch


def _lookup(grid, rows, cols, fill):
    H, W = grid.shape
    inside = (rows >= 0) & (rows < H) & (cols >= 0) & (cols < W)
    out = np.full(rows.shape, fill, dtype=grid.dtype)
    out[inside] = grid[rows[inside], cols[inside]]
    return out, inside


def project_ego_map(history: ObservationHistory, current: Pose, mp: MapParams | None = None,
                    n_categories: int = 12) -> EgoSemMap:
    """Rasterize the aggregated history into the current agent frame.

    Later observations overwrite earlier ones where they disagree.
    """
    mp = mp or MapParams()
    if len(history) == 0:
        raise ValueError("empty observation history")
    first = history[0]
    agg = np.full(first.world_shape, -1, dtype=np.int16)
    for obs in history:
        agg[obs.cells[:, 0], obs.cells[:, 1]] = obs.labels
    rows, cols = map_cells_to_world(current, mp, first.resolution)
    vals, _ = _lookup(agg, rows, cols, -1)
    observed = vals >= 0
    labels = np.where(observed, vals, n_categories).astype(np.uint8)
    return EgoSemMap(labels, observed, n_categories)


def observable_mask(w: World) -> np.ndarray:
    """Cells a sensor could ever report: everything except the interior of opaque blobs."""
    if "observable" not in w._cache:
        pad = np.pad(w.opaque, 1, constant_values=True)
        H, W = w.shape
        interior = np.ones((H, W), dtype=bool)
        for dr in (-1, 0, 1):
            for dc in (-1, 0, 1):
                interior &= pad[1 + dr:1 + dr + H, 1 + dc:1 + dc + W]
        w._cache["observable"] = ~interior
    return w._cache["observable"]


def ground_truth_ego_map(w: World, pose: Pose, mp: MapParams | None = None) -> EgoSemMap:
    """Privileged completion target in the same frame as :func:`project_ego_map`."""
    mp = mp or MapParams()
    rows, cols = map_cells_to_world(pose, mp, w.resolution)
    labels, inside = _lookup(w.labels, rows, cols, w.n_categories)
    obs_ok, _ = _lookup(observable_mask(w), rows, cols, False)
    observed = inside & obs_ok
    labels = np.where(observed, labels, w.n_categories).astype(np.uint8)
    return EgoSemMap(labels, observed, w.n_categories)


def agent_pixel(mp: MapParams) -> tuple[int, int]:
    """Map cell whose lower corner is the agent position."""
    return (mp.size // 2, mp.size // 2)
