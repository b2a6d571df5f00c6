"""World, room, object and pose types.

World frame conventions: ``x`` runs along grid columns and ``y`` along grid
rows, both in meters. Cell ``(i, j)`` covers ``x in [j*res, (j+1)*res)`` and
``y in [i*res, (i+1)*res)``. Headings are radians, counter-clockwise from +x
in that (x, y) frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .categories import CATEGORIES, TALL_CATEGORIES


@dataclass(frozen=True)
class Pose:
    x: float
    y: float
    heading: float

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass
class Room:
    room_type: str
    # (row0, row1, col0, col1) interior bounds, half-open
    rect: tuple[int, int, int, int]


@dataclass
class ObjectInstance:
    category: int
    footprint: np.ndarray  # (K, 2) int rows/cols
    centroid: tuple[float, float]
    radius: float
    tall: bool
    room_id: int = -1

    @classmethod
    def from_cells(cls, category, cells, resolution, tall, room_id=-1):
        cells = np.asarray(cells, dtype=np.int64).reshape(-1, 2)
        centers = (cells[:, ::-1] + 0.5) * resolution  # (x, y)
        c = centers.mean(axis=0)
        radius = float(np.sqrt(((centers - c) ** 2).sum(axis=1)).max())
        return cls(int(category), cells, (float(c[0]), float(c[1])), radius, bool(tall), room_id)


@dataclass
class World:
    resolution: float
    labels: np.ndarray  # (H, W) uint8
    opaque: np.ndarray  # (H, W) bool
    navigable: np.ndarray  # (H, W) bool
    room_ids: np.ndarray  # (H, W) int16, -1 outside rooms
    rooms: list[Room]
    objects: list[ObjectInstance]
    seed: int
    categories: tuple[str, ...] = CATEGORIES
    doors: int = 0
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def shape(self) -> tuple[int, int]:
        return self.labels.shape

    @property
    def n_categories(self) -> int:
        return len(self.categories)

    @property
    def size_m(self) -> tuple[float, float]:
        """(width, height) in meters."""
        h, w = self.shape
        return (w * self.resolution, h * self.resolution)

    def cell_of(self, x: float, y: float) -> tuple[int, int]:
        return (int(math.floor(y / self.resolution)), int(math.floor(x / self.resolution)))

    def cell_center(self, row: int, col: int) -> tuple[float, float]:
        return ((col + 0.5) * self.resolution, (row + 0.5) * self.resolution)

    def in_bounds(self, row: int, col: int) -> bool:
        h, w = self.shape
        return 0 <= row < h and 0 <= col < w

    def is_navigable(self, x: float, y: float) -> bool:
        r, c = self.cell_of(x, y)
        return self.in_bounds(r, c) and bool(self.navigable[r, c])

    def room_type_at(self, x: float, y: float) -> str | None:
        r, c = self.cell_of(x, y)
        if not self.in_bounds(r, c):
            return None
        k = int(self.room_ids[r, c])
        return self.rooms[k].room_type if k >= 0 else None

    def instances_of(self, category: int) -> list[int]:
        return [i for i, o in enumerate(self.objects) if o.category == category]

    def label_index(self, name: str) -> int:
        return self.categories.index(name)


def check_invariants(w: World) -> list[str]:
    """Return human-readable violations of the World invariants (empty if valid)."""
    problems = []
    if np.any(w.opaque & w.navigable):
        problems.append("opaque cells marked navigable")
    if np.any(w.labels >= w.n_categories):
        problems.append("label out of range")
    for k, obj in enumerate(w.objects):
        if len(obj.footprint) == 0:
            problems.append(f"object {k} has empty footprint")
            continue
        rr, cc = obj.footprint[:, 0], obj.footprint[:, 1]
        if np.any(w.labels[rr, cc] != obj.category):
            problems.append(f"object {k} cells carry a foreign label")
        rooms = np.unique(w.room_ids[rr, cc])
        if len(rooms) != 1 or rooms[0] < 0:
            problems.append(f"object {k} spans rooms {rooms.tolist()}")
        if obj.radius < 0:
            problems.append(f"object {k} has negative radius")
        if obj.tall != (w.categories[obj.category] in TALL_CATEGORIES):
            problems.append(f"object {k} tall flag inconsistent")
    # room cell sets are disjoint by construction of room_ids; check rect agreement
    for k, room in enumerate(w.rooms):
        r0, r1, c0, c1 = room.rect
        if np.any(w.room_ids[r0:r1, c0:c1] != k):
            problems.append(f"room {k} rect not owned by room id")
    if np.count_nonzero(w.room_ids >= 0) != sum(
        (r.rect[1] - r.rect[0]) * (r.rect[3] - r.rect[2]) for r in w.rooms
    ):
        problems.append("room cell sets overlap or leak")
    _, n = ndimage.label(w.navigable)
    if n != 1:
        problems.append(f"navigable set has {n} components")
    return problems
