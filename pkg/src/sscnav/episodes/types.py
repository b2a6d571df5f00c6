from __future__ import annotations

from dataclasses import dataclass, field

from ..world.core import Pose

STOP_REASONS = ("stop_checker", "step_limit")


@dataclass(frozen=True)
class EpisodeSpec:
    world_seed: int
    start: Pose
    goal: int
    shortest_path: float  # meters, geodesic to the nearest goal instance at the start
    episode_id: int = 0


@dataclass
class EpisodeResult:
    success: bool
    path_length: float
    steps: int
    stop_reason: str
    total_reward: float = 0.0
    poses: list = field(default_factory=list)  # [(x, y, heading)] including the start
