"""Double-DQN navigation over spatial action maps, with ablation variants."""

from .actions import (
    COLLISION_M,
    N_SPARSE,
    STEP_M,
    execute_action,
    execute_flat,
    pixel_target,
    select_action,
    select_actions,
    sparse8_execute,
)
from .agent import NavAgent
from .dqn import DQNConfig, DoubleDQN, action_mode_of, dqn_loss, dqn_update, flat_q, q_network
from .replay import ReplayBuffer, Transition, TransitionBatch
from .reward import RewardParams, compute_reward
from .state import (
    VARIANTS,
    CompactStates,
    StateEncoder,
    VariantConfig,
    assemble_state,
    state_channels,
    variant,
)
from .train import NavTrainConfig, NavTrainResult, epsilon_at, train_nav

__all__ = [
    "COLLISION_M",
    "N_SPARSE",
    "STEP_M",
    "VARIANTS",
    "CompactStates",
    "DQNConfig",
    "DoubleDQN",
    "NavAgent",
    "NavTrainConfig",
    "NavTrainResult",
    "ReplayBuffer",
    "RewardParams",
    "StateEncoder",
    "Transition",
    "TransitionBatch",
    "VariantConfig",
    "action_mode_of",
    "assemble_state",
    "compute_reward",
    "dqn_loss",
    "dqn_update",
    "epsilon_at",
    "execute_action",
    "execute_flat",
    "flat_q",
    "pixel_target",
    "q_network",
    "select_action",
    "select_actions",
    "sparse8_execute",
    "state_channels",
    "train_nav",
    "variant",
]
