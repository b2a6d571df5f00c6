from .categories import CATEGORIES, TARGET_CATEGORIES, VALID_ROOM_TYPES
from .core import ObjectInstance, Pose, Room, World, check_invariants
from .generate import WorldParams, generate_world
from .geodesic import (
    distance_field,
    geodesic_distance,
    instance_distance,
    nearest_instance,
    target_field,
)
from .io import load_world, save_world, world_from_bytes, world_to_bytes

__all__ = [
    "CATEGORIES",
    "TARGET_CATEGORIES",
    "VALID_ROOM_TYPES",
    "ObjectInstance",
    "Pose",
    "Room",
    "World",
    "WorldParams",
    "check_invariants",
    "distance_field",
    "generate_world",
    "geodesic_distance",
    "instance_distance",
    "load_world",
    "nearest_instance",
    "save_world",
    "target_field",
    "world_from_bytes",
    "world_to_bytes",
]
