"""Procedural house generation.

Rooms come from a binary space partition of the house rectangle. Every split
line becomes a wall, and one door is carved per split between two rooms that
face each other across it, so the room graph is a tree and always connected.
Furniture is then dropped into each room from its type's table, rejecting any
placement that would cut the walkable area in two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from ..errors import GenerationError
from .categories import CATEGORIES, FURNITURE, MANDATORY_ROOMS, TALL_CATEGORIES, FurnitureRule
from .core import ObjectInstance, Room, World

_EXTRA_ROOMS = ("bedroom", "dining_room", "laundry_room", "family_room", "hallway",
                "bathroom", "kitchen", "living_room")


@dataclass(frozen=True)
class WorldParams:
    width_m: float = 10.0
    height_m: float = 8.0
    min_rooms: int = 4
    max_rooms: int = 7
    resolution: float = 0.0625
    min_room_m: float = 2.0
    wall_cells: int = 2
    door_m: float = 0.9
    door_clearance_m: float = 0.6
    categories: tuple[str, ...] = CATEGORIES
    max_retries: int = 20

    def validate(self):
        if self.min_rooms < 1 or self.max_rooms < self.min_rooms:
            raise GenerationError(f"bad room count range [{self.min_rooms}, {self.max_rooms}]")
        if self.resolution <= 0 or self.width_m <= 0 or self.height_m <= 0:
            raise GenerationError("world size and resolution must be positive")
        for required in ("floor", "wall", "door"):
            if required not in self.categories:
                raise GenerationError(f"category set lacks {required!r}")


def generate_world(seed: int, params: WorldParams | None = None) -> World:
    """Generate a deterministic house for ``seed``.

    Raises GenerationError if the room layout cannot be satisfied within
    ``params.max_retries`` attempts.
    """
    params = params or WorldParams()
    params.validate()
    rng = np.random.default_rng(seed)
    for _ in range(params.max_retries):
        n_rooms = int(rng.integers(params.min_rooms, params.max_rooms + 1))
        world = _try_generate(seed, params, n_rooms, rng)
        if world is not None:
            return world
    raise GenerationError(
        f"could not fit {params.min_rooms}-{params.max_rooms} rooms of >= {params.min_room_m} m "
        f"into {params.width_m} x {params.height_m} m after {params.max_retries} attempts"
    )


def _try_generate(seed, params, n_rooms, rng):
    res = params.resolution
    H = int(round(params.height_m / res))
    W = int(round(params.width_m / res))
    t = params.wall_cells
    m = int(math.ceil(params.min_room_m / res))
    if H < 2 * t + m or W < 2 * t + m:
        return None

    leaves = [(0, H, 0, W)]
    tree = []  # (axis, s, node rect)
    while len(leaves) < n_rooms:
        cand = []
        for k, (r0, r1, c0, c1) in enumerate(leaves):
            axes = []
            if r1 - r0 >= 3 * t + 2 * m:
                axes.append(0)
            if c1 - c0 >= 3 * t + 2 * m:
                axes.append(1)
            if axes:
                cand.append((k, axes, (r1 - r0) * (c1 - c0)))
        if not cand:
            return None
        areas = np.array([a for _, _, a in cand], dtype=float)
        k, axes, _ = cand[int(rng.choice(len(cand), p=areas / areas.sum()))]
        r0, r1, c0, c1 = leaves[k]
        if len(axes) == 2:
            axis = 0 if (r1 - r0) > (c1 - c0) else 1
            if (r1 - r0) == (c1 - c0):
                axis = int(rng.integers(2))
        else:
            axis = axes[0]
        lo, hi = (r0, r1) if axis == 0 else (c0, c1)
        s = int(rng.integers(lo + t + m, hi - 2 * t - m + 1))
        if axis == 0:
            a, b = (r0, s + t, c0, c1), (s, r1, c0, c1)
        else:
            a, b = (r0, r1, c0, s + t), (r0, r1, s, c1)
        tree.append((axis, s, leaves[k]))
        leaves[k] = a
        leaves.append(b)

    cat = params.categories
    wall, floor, door = cat.index("wall"), cat.index("floor"), cat.index("door")
    labels = np.full((H, W), wall, dtype=np.uint8)
    room_ids = np.full((H, W), -1, dtype=np.int16)
    rects = []
    for k, (r0, r1, c0, c1) in enumerate(leaves):
        rect = (r0 + t, r1 - t, c0 + t, c1 - t)
        rects.append(rect)
        labels[rect[0]:rect[1], rect[2]:rect[3]] = floor
        room_ids[rect[0]:rect[1], rect[2]:rect[3]] = k

    door_w = max(1, int(round(params.door_m / res)))
    door_mask = np.zeros((H, W), dtype=bool)
    n_doors = 0
    for axis, s, (nr0, nr1, nc0, nc1) in tree:
        best = None
        for ia, ra in enumerate(rects):
            for ib, rb in enumerate(rects):
                if axis == 0:
                    if ra[1] != s or rb[0] != s + t:
                        continue
                    if not (nc0 <= ra[2] and ra[3] <= nc1 and nc0 <= rb[2] and rb[3] <= nc1):
                        continue
                    lo, hi = max(ra[2], rb[2]), min(ra[3], rb[3])
                else:
                    if ra[3] != s or rb[2] != s + t:
                        continue
                    if not (nr0 <= ra[0] and ra[1] <= nr1 and nr0 <= rb[0] and rb[1] <= nr1):
                        continue
                    lo, hi = max(ra[0], rb[0]), min(ra[1], rb[1])
                if hi - lo >= 1 and (best is None or hi - lo > best[1] - best[0]):
                    best = (lo, hi)
        if best is None:
            return None
        lo, hi = best
        w = min(door_w, hi - lo)
        p = int(rng.integers(lo, hi - w + 1))
        if axis == 0:
            door_mask[s:s + t, p:p + w] = True
        else:
            door_mask[p:p + w, s:s + t] = True
        n_doors += 1
    labels[door_mask] = door

    types = _assign_room_types(len(rects), rng)
    rooms = [Room(rt, rect) for rt, rect in zip(types, rects)]

    navigable = (labels == floor) | (labels == door)
    opaque = labels == wall
    clear = int(math.ceil(params.door_clearance_m / res))
    reserved = ndimage.binary_dilation(door_mask, structure=np.ones((3, 3), bool), iterations=clear)

    objects = []
    for k, room in enumerate(rooms):
        for rule in FURNITURE[room.room_type]:
            if rule.category not in cat:
                continue
            count = int(rng.integers(rule.count[0], rule.count[1] + 1))
            for _ in range(count):
                cells = _place(rule, room.rect, labels, navigable, reserved, floor, res, rng)
                if cells is None:
                    continue
                label = cat.index(rule.category)
                tall = rule.category in TALL_CATEGORIES
                rr, cc = cells[:, 0], cells[:, 1]
                labels[rr, cc] = label
                navigable[rr, cc] = False
                if tall:
                    opaque[rr, cc] = True
                objects.append(ObjectInstance.from_cells(label, cells, res, tall, room_id=k))

    return World(
        resolution=res,
        labels=labels,
        opaque=opaque,
        navigable=navigable,
        room_ids=room_ids,
        rooms=rooms,
        objects=objects,
        seed=int(seed),
        categories=tuple(cat),
        doors=n_doors,
    )


def _assign_room_types(n, rng):
    mandatory = list(MANDATORY_ROOMS)
    rng.shuffle(mandatory)
    types = mandatory[:n]
    while len(types) < n:
        types.append(_EXTRA_ROOMS[int(rng.integers(len(_EXTRA_ROOMS)))])
    order = rng.permutation(n)
    return [types[i] for i in order]


def _place(rule: FurnitureRule, rect, labels, navigable, reserved, floor, res, rng, attempts=30):
    r0, r1, c0, c1 = rect
    for _ in range(attempts):
        long = max(1, int(round(rng.uniform(*rule.long_side) / res)))
        short = max(1, int(round(rng.uniform(*rule.short_side) / res)))
        if rule.against_wall:
            side = int(rng.integers(4))
            # long side runs along the wall
            if side in (0, 1):
                h, w = short, long
            else:
                h, w = long, short
            if h > r1 - r0 or w > c1 - c0:
                continue
            if side == 0:
                top, left = r0, int(rng.integers(c0, c1 - w + 1))
            elif side == 1:
                top, left = r1 - h, int(rng.integers(c0, c1 - w + 1))
            elif side == 2:
                top, left = int(rng.integers(r0, r1 - h + 1)), c0
            else:
                top, left = int(rng.integers(r0, r1 - h + 1)), c1 - w
        else:
            h, w = (long, short) if rng.integers(2) else (short, long)
            margin = int(round(0.4 / res))
            if h > r1 - r0 - 2 * margin or w > c1 - c0 - 2 * margin:
                continue
            top = int(rng.integers(r0 + margin, r1 - margin - h + 1))
            left = int(rng.integers(c0 + margin, c1 - margin - w + 1))
        # keep a one-cell gap to other furniture
        g0, g1 = max(top - 1, r0), min(top + h + 1, r1)
        h0, h1 = max(left - 1, c0), min(left + w + 1, c1)
        if np.any(labels[g0:g1, h0:h1] != floor):
            continue
        if np.any(reserved[top:top + h, left:left + w]):
            continue
        trial = navigable.copy()
        trial[top:top + h, left:left + w] = False
        _, n = ndimage.label(trial)
        if n != 1:
            continue
        rr, cc = np.mgrid[top:top + h, left:left + w]
        return np.stack([rr.ravel(), cc.ravel()], axis=1)
    return None
