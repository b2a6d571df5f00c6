"""Per-step reward."""

from __future__ import annotations

from dataclasses import dataclass

from .actions import COLLISION_M


@dataclass(frozen=True)
class RewardParams:
    life: float = -0.01
    collision: float = -0.25
    collision_m: float = COLLISION_M
    progress: float = 1.0  # per meter of geodesic approach
    success: float = 10.0


def compute_reward(prev_geo: float, new_geo: float, step_length: float, success: bool,
                   params: RewardParams | None = None) -> float:
    p = params or RewardParams()
    r = p.life + p.progress * (prev_geo - new_geo)
    if step_length < p.collision_m:
        r += p.collision
    if success:
        r += p.success
    return r
