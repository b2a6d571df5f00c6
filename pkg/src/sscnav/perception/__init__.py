from .egomap import (
    EgoSemMap,
    MapParams,
    ObservationHistory,
    agent_to_world,
    ground_truth_ego_map,
    map_cells_to_world,
    observable_mask,
    project_ego_map,
    world_to_agent,
)
from .io import load_map, map_from_bytes, map_to_bytes, save_map
from .sensor import EgoObservation, SensorParams, cast_rays, ray_angles, raycast_observe

__all__ = [
    "EgoObservation",
    "EgoSemMap",
    "MapParams",
    "ObservationHistory",
    "SensorParams",
    "agent_to_world",
    "cast_rays",
    "ground_truth_ego_map",
    "load_map",
    "map_cells_to_world",
    "map_from_bytes",
    "map_to_bytes",
    "observable_mask",
    "project_ego_map",
    "ray_angles",
    "raycast_observe",
    "save_map",
    "world_to_agent",
]
