"""Lock-step evaluation of many episodes with batched policy calls."""

from __future__ import annotations

import json
from dataclasses import replace

import numpy as np

from ..perception.egomap import MapParams
from .env import EnvConfig, NavEnv
from .types import EpisodeResult, EpisodeSpec


class RandomPolicy:
    """Uniform over the action space; the exploration baseline."""

    def __init__(self, action_mode: str = "spatial", mp: MapParams | None = None):
        self.action_mode = action_mode
        self.mp = mp or MapParams()

    @property
    def n_actions(self) -> int:
        return 8 if self.action_mode == "sparse8" else self.mp.size ** 2

    def act(self, maps, goals, rng: np.random.Generator) -> np.ndarray:
        return rng.integers(self.n_actions, size=len(maps))


def run_episodes(policy, worlds: dict, specs: list[EpisodeSpec], cfg: EnvConfig | None = None,
                 seed: int = 0, batch: int = 16) -> list[EpisodeResult]:
    """Run every episode to termination, ``batch`` environments at a time.

    ``worlds`` maps world seed to World. Each episode's sensor noise uses its
    own stream derived from ``seed`` and its episode id, and the policy's
    randomness comes from one stream per batch, so results do not depend on
    the order in which episodes finish.
    """
    cfg = cfg or EnvConfig()
    cfg = replace(cfg, action_mode=getattr(policy, "action_mode", cfg.action_mode))
    results: list[EpisodeResult | None] = [None] * len(specs)
    for start in range(0, len(specs), batch):
        chunk = list(range(start, min(start + batch, len(specs))))
        rng = np.random.default_rng([seed, start])
        envs = {}
        for i in chunk:
            s = specs[i]
            envs[i] = NavEnv(worlds[s.world_seed], s, cfg, np.random.default_rng([seed, s.episode_id, 1]))
            envs[i].reset()
        live = list(chunk)
        while live:
            maps = [envs[i].observation for i in live]
            goals = [specs[i].goal for i in live]
            actions = policy.act(maps, goals, rng)
            for i, a in zip(live, actions):
                envs[i].step(int(a))
            for i in live:
                if envs[i].done:
                    results[i] = envs[i].result()
            live = [i for i in live if not envs[i].done]
    return results


def episode_record(spec: EpisodeSpec, result: EpisodeResult) -> dict:
    return {
        "episode": spec.episode_id,
        "world_seed": spec.world_seed,
        "goal": spec.goal,
        "l": spec.shortest_path,
        "p": result.path_length,
        "steps": result.steps,
        "success": result.success,
        "stop_reason": result.stop_reason,
        "reward": result.total_reward,
        "poses": [[round(v, 6) for v in p] for p in result.poses],
    }


def write_episode_log(path, specs, results) -> None:
    with open(path, "w") as f:
        for s, r in zip(specs, results):
            f.write(json.dumps(episode_record(s, r)) + "\n")


def read_episode_log(path) -> list[dict]:
    with open(path) as f:
        return [json.loads(line) for line in f if line.strip()]
