"""Policy object tying state assembly to a Q network."""

from __future__ import annotations

import numpy as np
import torch

from ..errors import ConfigurationError
from ..nn import Network
from .actions import select_actions
from .dqn import action_mode_of, flat_q
from .state import CompactStates, StateEncoder, VariantConfig


class NavAgent:
    """Epsilon-greedy policy over Q values of the encoded state."""

    def __init__(self, encoder: StateEncoder, qnet: Network, eps: float = 0.0):
        mode = action_mode_of(qnet)
        if mode != encoder.variant.action_mode:
            raise ConfigurationError(
                f"Q network has a {mode} head but the variant uses {encoder.variant.action_mode} actions",
                "variant")
        self.encoder = encoder
        self.qnet = qnet
        self.eps = eps
        self.last_states: CompactStates | None = None
        self.last_q: np.ndarray | None = None

    @property
    def variant(self) -> VariantConfig:
        return self.encoder.variant

    @property
    def action_mode(self) -> str:
        return self.variant.action_mode

    @torch.no_grad()
    def q_values(self, states: CompactStates) -> np.ndarray:
        self.qnet.eval()
        return flat_q(self.qnet, states.decode()).numpy()

    def act(self, maps, goals, rng: np.random.Generator | None = None) -> np.ndarray:
        return self.act_states(self.encoder.encode(maps, goals), rng)

    def act_states(self, states: CompactStates, rng: np.random.Generator | None = None) -> np.ndarray:
        """Like ``act`` for states that are already encoded."""
        q = self.q_values(states)
        self.last_states, self.last_q = states, q
        return select_actions(q, self.eps, rng)
