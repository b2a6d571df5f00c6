"""Q network and the double-DQN learner."""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

import torch

from ..errors import ConfigurationError
from ..nn import Network, OptimizerConfig, backward, build_network, encoder_decoder_spec, make_optimizer
from ..nn import optimizer_step
from .actions import N_SPARSE
from .replay import TransitionBatch
from .state import state_channels

DEFAULT_Q_WIDTHS = (16, 32, 64, 128, 128)


def q_network(n_categories: int, size: int, action_mode: str = "spatial",
              widths=DEFAULT_Q_WIDTHS, seed: int = 2) -> Network:
    """Encoder-decoder with a 1-channel map head, or a pooled 8-way head for sparse actions."""
    c = state_channels(n_categories)
    if action_mode == "spatial":
        return build_network(encoder_decoder_spec(c, 1, size, tuple(widths)), seed)
    if action_mode == "sparse8":
        return build_network(encoder_decoder_spec(c, N_SPARSE, size, tuple(widths), head="vector"), seed)
    raise ConfigurationError(f"unknown action mode {action_mode!r}", "action_mode")


def action_mode_of(net: Network) -> str:
    return "sparse8" if net.spec.layers[-1].kind == "head_vector" else "spatial"


def flat_q(net: Network, x: torch.Tensor) -> torch.Tensor:
    """(B, A) Q values: pixels in row-major order, or the 8 sparse actions."""
    return net(x).reshape(x.shape[0], -1)


def dqn_loss(online: Network, target: Network, states: torch.Tensor, actions: torch.Tensor,
             rewards: torch.Tensor, next_states: torch.Tensor, dones: torch.Tensor,
             gamma: float) -> torch.Tensor:
    """Mean absolute double-DQN error.

    The bootstrap action is chosen by ``online`` and valued by ``target``;
    terminal transitions use the reward alone.
    """
    q = flat_q(online, states).gather(1, actions[:, None])[:, 0]
    with torch.no_grad():
        if gamma == 0:
            boot = torch.zeros_like(rewards)
        else:
            a_next = flat_q(online, next_states).argmax(dim=1, keepdim=True)
            boot = flat_q(target, next_states).gather(1, a_next)[:, 0]
            boot = torch.where(dones, torch.zeros_like(boot), boot)
        y = rewards + gamma * boot
    return (y - q).abs().mean()


@dataclass
class DQNConfig:
    gamma: float = 0.99
    batch_size: int = 16
    buffer: int = 50_000
    sync_every: int = 1000
    optimizer: OptimizerConfig = field(default_factory=lambda: OptimizerConfig(lr=1e-4))


class DoubleDQN:
    """Online and target networks with periodic hard sync."""

    def __init__(self, online: Network, cfg: DQNConfig | None = None):
        self.cfg = cfg or DQNConfig()
        self.online = online
        self.target = copy.deepcopy(online)
        for p in self.target.parameters():
            p.requires_grad_(False)
        self.target.eval()
        self.opt = make_optimizer(online.parameters(), self.cfg.optimizer)
        self.updates = 0

    def sync(self) -> None:
        self.target.load_state_dict(self.online.state_dict())

    def update(self, batch: TransitionBatch) -> float:
        return dqn_update(self, batch)

    @torch.no_grad()
    def q_values(self, x: torch.Tensor) -> torch.Tensor:
        self.online.eval()
        return flat_q(self.online, x)


def dqn_update(learner: DoubleDQN, batch: TransitionBatch, gamma: float | None = None) -> float:
    """One gradient step on a replay batch; syncs the target every ``sync_every`` updates."""
    g = learner.cfg.gamma if gamma is None else gamma
    learner.online.train()
    loss = dqn_loss(
        learner.online, learner.target,
        batch.states.decode(), torch.from_numpy(batch.actions),
        torch.from_numpy(batch.rewards).float(), batch.next_states.decode(),
        torch.from_numpy(batch.dones), g,
    )
    learner.opt.zero_grad()
    backward(loss)
    optimizer_step(learner.opt)
    learner.updates += 1
    if learner.updates % learner.cfg.sync_every == 0:
        learner.sync()
    return float(loss.detach())
