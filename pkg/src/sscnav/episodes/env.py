"""Single-episode environment: sense, project, act, check for a stop, reward."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..nav.actions import COLLISION_M, STEP_M, execute_flat
from ..nav.reward import RewardParams, compute_reward
from ..perception.egomap import EgoSemMap, MapParams, ObservationHistory, project_ego_map
from ..perception.sensor import SensorParams, raycast_observe
from ..world.core import Pose, World
from ..world.geodesic import target_field
from .success import StopParams, adjudicate_success, stop_check
from .types import EpisodeResult, EpisodeSpec

MAX_STEPS = 500


@dataclass(frozen=True)
class EnvConfig:
    sensor: SensorParams = field(default_factory=SensorParams)
    map: MapParams = field(default_factory=MapParams)
    stop: StopParams = field(default_factory=StopParams)
    reward: RewardParams = field(default_factory=RewardParams)
    max_steps: int = MAX_STEPS
    step_m: float = STEP_M
    collision_m: float = COLLISION_M
    action_mode: str = "spatial"
    record_poses: bool = True


@dataclass
class StepOutcome:
    observation: EgoSemMap
    reward: float
    done: bool
    success: bool
    step_length: float
    collided: bool


class NavEnv:
    def __init__(self, world: World, spec: EpisodeSpec, cfg: EnvConfig | None = None,
                 rng: np.random.Generator | None = None):
        if world.seed != spec.world_seed:
            raise ValueError(f"episode is for world {spec.world_seed}, got {world.seed}")
        self.world = world
        self.spec = spec
        self.cfg = cfg or EnvConfig()
        self.rng = rng if rng is not None else np.random.default_rng(spec.episode_id)
        self.history = ObservationHistory(self.cfg.map.history)
        self._field = target_field(world, spec.goal)
        self.done = True

    def _geo(self, pose: Pose) -> float:
        return float(self._field[self.world.cell_of(pose.x, pose.y)])

    def _observe(self) -> EgoSemMap:
        self.history.push(raycast_observe(self.world, self.pose, self.cfg.sensor, self.rng))
        return project_ego_map(self.history, self.pose, self.cfg.map, self.world.n_categories)

    def reset(self) -> EgoSemMap:
        self.pose = self.spec.start
        self.history.clear()
        self.steps = 0
        self.path_length = 0.0
        self.total_reward = 0.0
        self.success = False
        self.stop_reason = None
        self.geo = self._geo(self.pose)
        self.poses = [(self.pose.x, self.pose.y, self.pose.heading)]
        self.done = False
        self.observation = self._observe()
        return self.observation

    def step(self, action: int) -> StepOutcome:
        if self.done:
            raise RuntimeError("episode is over; call reset()")
        cfg = self.cfg
        pose, moved, collided = execute_flat(self.world, self.pose, action, cfg.action_mode, cfg.map,
                                             cfg.step_m, cfg.collision_m)
        self.pose = pose
        self.steps += 1
        self.path_length += moved
        if cfg.record_poses:
            self.poses.append((pose.x, pose.y, pose.heading))
        obs = self._observe()
        stopped = stop_check(self.world, pose, self.spec.goal, cfg.sensor, cfg.stop, self.rng)
        success = adjudicate_success(self.world, pose, self.spec.goal, stopped, cfg.sensor,
                                     cfg.stop.proximity)
        geo = self._geo(pose)
        r = compute_reward(self.geo, geo, moved, success, cfg.reward)
        self.geo = geo
        self.total_reward += r
        if stopped:
            self.done, self.stop_reason = True, "stop_checker"
        elif self.steps >= cfg.max_steps:
            self.done, self.stop_reason = True, "step_limit"
        self.success = success
        self.observation = obs
        return StepOutcome(obs, r, self.done, success, moved, collided)

    def result(self) -> EpisodeResult:
        if not self.done or self.stop_reason is None:
            raise RuntimeError("episode still running")
        return EpisodeResult(self.success, self.path_length, self.steps, self.stop_reason,
                             self.total_reward, list(self.poses))
