"""Semantic categories, room types and the room-type -> furniture table."""

from __future__ import annotations

from dataclasses import dataclass

CATEGORIES: tuple[str, ...] = (
    "floor",
    "wall",
    "door",
    "bed",
    "counter",
    "shower",
    "sink",
    "sofa",
    "table",
    "toilet",
    "chair",
    "cabinet",
)

# Goal categories used for navigation episodes.
TARGET_CATEGORIES: tuple[str, ...] = ("bed", "counter", "shower", "sink", "sofa", "table", "toilet")

# Occluding categories. Everything else is visible through (low furniture).
TALL_CATEGORIES = frozenset({"wall", "shower", "cabinet"})

VALID_ROOM_TYPES: tuple[str, ...] = (
    "bathroom",
    "bedroom",
    "dining_room",
    "kitchen",
    "living_room",
    "laundry_room",
    "family_room",
)
# Rooms that exist in generated houses but are not legal episode starts.
OTHER_ROOM_TYPES: tuple[str, ...] = ("hallway",)
ROOM_TYPES: tuple[str, ...] = VALID_ROOM_TYPES + OTHER_ROOM_TYPES

# Every house gets these first so that each target category has a home.
MANDATORY_ROOMS: tuple[str, ...] = ("bedroom", "bathroom", "kitchen", "living_room")


@dataclass(frozen=True)
class FurnitureRule:
    category: str
    count: tuple[int, int]
    # (long side, short side) ranges in meters
    long_side: tuple[float, float]
    short_side: tuple[float, float]
    against_wall: bool = True


FURNITURE: dict[str, tuple[FurnitureRule, ...]] = {
    "bedroom": (
        FurnitureRule("bed", (1, 1), (1.6, 2.0), (1.0, 1.5)),
        FurnitureRule("cabinet", (0, 1), (0.6, 1.0), (0.4, 0.6)),
        FurnitureRule("table", (0, 1), (0.4, 0.5), (0.4, 0.5)),
        FurnitureRule("chair", (0, 1), (0.4, 0.5), (0.4, 0.5), against_wall=False),
    ),
    "bathroom": (
        FurnitureRule("shower", (1, 1), (0.8, 1.0), (0.8, 0.9)),
        FurnitureRule("toilet", (1, 1), (0.6, 0.7), (0.4, 0.5)),
        FurnitureRule("sink", (1, 1), (0.5, 0.7), (0.4, 0.5)),
    ),
    "kitchen": (
        FurnitureRule("counter", (1, 2), (1.2, 2.2), (0.6, 0.7)),
        FurnitureRule("sink", (1, 1), (0.6, 0.8), (0.5, 0.6)),
        FurnitureRule("cabinet", (0, 1), (0.6, 1.0), (0.4, 0.6)),
        FurnitureRule("table", (0, 1), (0.8, 1.2), (0.6, 0.8), against_wall=False),
    ),
    "living_room": (
        FurnitureRule("sofa", (1, 1), (1.6, 2.2), (0.8, 1.0)),
        FurnitureRule("table", (1, 1), (0.8, 1.2), (0.5, 0.7), against_wall=False),
        FurnitureRule("chair", (0, 2), (0.5, 0.6), (0.5, 0.6), against_wall=False),
        FurnitureRule("cabinet", (0, 1), (0.8, 1.2), (0.4, 0.5)),
    ),
    "dining_room": (
        FurnitureRule("table", (1, 1), (1.2, 1.8), (0.8, 1.0), against_wall=False),
        FurnitureRule("chair", (2, 4), (0.4, 0.5), (0.4, 0.5), against_wall=False),
        FurnitureRule("cabinet", (0, 1), (0.8, 1.2), (0.4, 0.5)),
    ),
    "laundry_room": (
        FurnitureRule("sink", (1, 1), (0.5, 0.7), (0.4, 0.5)),
        FurnitureRule("cabinet", (1, 1), (0.6, 1.0), (0.4, 0.6)),
        FurnitureRule("counter", (0, 1), (1.0, 1.6), (0.6, 0.7)),
    ),
    "family_room": (
        FurnitureRule("sofa", (1, 1), (1.6, 2.2), (0.8, 1.0)),
        FurnitureRule("table", (0, 1), (0.8, 1.2), (0.5, 0.7), against_wall=False),
        FurnitureRule("chair", (0, 1), (0.5, 0.6), (0.5, 0.6), against_wall=False),
    ),
    "hallway": (),
}


def label_of(name: str, categories: tuple[str, ...] = CATEGORIES) -> int:
    try:
        return categories.index(name)
    except ValueError:
        from ..errors import NotFoundError

        raise NotFoundError(f"unknown category {name!r}") from None
