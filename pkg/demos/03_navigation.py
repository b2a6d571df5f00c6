"""
Object-goal episodes, a random walker and a briefly trained agent
=================================================================

Samples held-out episodes, runs the uniform random policy and a -CF agent
(raw observed map, no completion) after a short double-DQN run, and reports
success rate and SPL. The short schedule shows the plumbing only, and the
agent usually does no better than the random walker here; a real run needs
tens of thousands of steps (see the README).
"""

from pathlib import Path

import numpy as np
import torch

from sscnav.episodes import EnvConfig, NavEnv, RandomPolicy, compute_metrics, run_episodes, sample_episodes
from sscnav.nav import NavAgent, NavTrainConfig, StateEncoder, q_network, train_nav, variant
from sscnav.perception import MapParams
from sscnav.render import render_qmap, render_trajectory, write_image
from sscnav.world import generate_world

torch.manual_seed(0)
out = Path("demo_out")
env = EnvConfig(map=MapParams(size=32), max_steps=150)
train_worlds = {s: generate_world(s) for s in range(20)}
test_worlds = {s: generate_world(s) for s in range(20000, 20004)}
specs = sample_episodes(list(test_worlds.values()), 12, np.random.default_rng(1))
for s in specs[:3]:
    print(f"episode {s.episode_id}: world {s.world_seed}, goal {s.goal}, shortest path {s.shortest_path:.2f} m")

random_runs = run_episodes(RandomPolicy("spatial", env.map), test_worlds, specs, env, batch=12)
print("random", {k: v for k, v in compute_metrics(list(zip(random_runs, specs))).items() if k != "per_category"})

v = variant("-cf")
agent = NavAgent(StateEncoder(v, 12), q_network(12, 32, v.action_mode, (4, 8, 16, 16, 16)))
train_nav(agent, train_worlds, NavTrainConfig(steps=1500, learning_starts=200), env)
runs = run_episodes(agent, test_worlds, specs, env, batch=12)
print("-CF   ", {k: v for k, v in compute_metrics(list(zip(runs, specs))).items() if k != "per_category"})

w = test_worlds[specs[0].world_seed]
write_image(render_trajectory(w, runs[0].poses, scale=3), out / "episode0.png")
agent.act([NavEnv(w, specs[0], env).reset()], [specs[0].goal])
write_image(render_qmap(agent.last_q[0].reshape(32, 32), scale=8), out / "episode0_q.png")
