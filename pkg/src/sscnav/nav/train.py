"""Vectorised double-DQN training over sampled episodes."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, replace

import numpy as np

from ..nn import save_checkpoint
from .agent import NavAgent
from .dqn import DoubleDQN, DQNConfig
from .replay import ReplayBuffer

log = logging.getLogger(__name__)


@dataclass
class NavTrainConfig:
    steps: int = 20_000  # environment steps summed over all parallel environments
    n_envs: int = 8
    eps_start: float = 1.0
    eps_end: float = 0.05
    eps_fraction: float = 0.3
    learning_starts: int = 500
    update_every: int = 4  # environment steps per gradient update
    dqn: DQNConfig = field(default_factory=DQNConfig)
    seed: int = 0


def epsilon_at(step: int, cfg: NavTrainConfig) -> float:
    """Linear decay from ``eps_start`` to ``eps_end`` over ``eps_fraction`` of training."""
    horizon = max(1.0, cfg.eps_fraction * cfg.steps)
    frac = min(1.0, step / horizon)
    return cfg.eps_start + frac * (cfg.eps_end - cfg.eps_start)


@dataclass
class NavTrainResult:
    agent: NavAgent
    learner: DoubleDQN
    log: list[dict]


def train_nav(agent: NavAgent, worlds: dict, cfg: NavTrainConfig | None = None,
              env_cfg=None, log_path=None, checkpoint_path=None) -> NavTrainResult:
    """Train ``agent.qnet`` in place.

    Writes one log record per finished episode: step, episode, reward (the
    episode return), loss (mean over updates since the last record) and
    epsilon.
    """
    # episodes depends on nav's action and reward code, so import it late
    from ..episodes.env import EnvConfig, NavEnv
    from ..episodes.sampler import sample_episode

    cfg = cfg or NavTrainConfig()
    env_cfg = replace(env_cfg or EnvConfig(), action_mode=agent.action_mode, record_poses=False)
    rng = np.random.default_rng(cfg.seed)
    learner = DoubleDQN(agent.qnet, cfg.dqn)
    buffer = ReplayBuffer(cfg.dqn.buffer)
    pool = list(worlds.values())
    records: list[dict] = []
    sink = open(log_path, "w") if log_path is not None else None
    episodes = 0

    def new_env():
        nonlocal episodes
        spec = sample_episode(pool, rng, episode_id=episodes)
        episodes += 1
        env = NavEnv(worlds[spec.world_seed], spec, env_cfg, np.random.default_rng([cfg.seed, spec.episode_id]))
        env.reset()
        return env

    envs = [new_env() for _ in range(cfg.n_envs)]
    states = agent.encoder.encode([e.observation for e in envs], [e.spec.goal for e in envs])
    losses: list[float] = []
    step = 0
    finished = 0
    try:
        while step < cfg.steps:
            agent.eps = epsilon_at(step, cfg)
            actions = agent.act_states(states, rng)
            outs = [e.step(int(a)) for e, a in zip(envs, actions)]
            nxt = agent.encoder.encode([o.observation for o in outs], states.goals)
            # the step cap is a time limit, not a terminal state: keep bootstrapping there
            terminal = np.array([o.done and e.stop_reason == "stop_checker" for o, e in zip(outs, envs)])
            buffer.push_batch(states, actions, [o.reward for o in outs], nxt, terminal)
            fresh = []
            for k, e in enumerate(envs):
                step += 1
                if step >= cfg.learning_starts and step % cfg.update_every == 0 \
                        and len(buffer) >= cfg.dqn.batch_size:
                    losses.append(learner.update(buffer.sample(cfg.dqn.batch_size, rng)))
                if e.done:
                    finished += 1
                    res = e.result()
                    rec = {"step": step, "episode": finished, "reward": res.total_reward,
                           "loss": float(np.mean(losses)) if losses else None, "epsilon": agent.eps,
                           "success": res.success, "steps": res.steps}
                    losses = []
                    records.append(rec)
                    if sink:
                        sink.write(json.dumps(rec) + "\n")
                        sink.flush()
                    log.info("nav %s", rec)
                    envs[k] = new_env()
                    fresh.append(k)
            states = nxt
            if fresh:
                states = nxt.with_rows(fresh, agent.encoder.encode(
                    [envs[k].observation for k in fresh], [envs[k].spec.goal for k in fresh]))
    finally:
        if sink:
            sink.close()
    agent.eps = 0.0
    agent.qnet.eval()
    if checkpoint_path is not None:
        save_checkpoint(agent.qnet, checkpoint_path)
    return NavTrainResult(agent, learner, records)
