"""Episode lifecycle: legal starts, stepping, stop checks, success and metrics."""

from .env import MAX_STEPS, EnvConfig, NavEnv, StepOutcome
from .metrics import compute_metrics, spl_term
from .runner import RandomPolicy, episode_record, read_episode_log, run_episodes, write_episode_log
from .sampler import (
    SUCCESS_DISTANCE,
    is_legal_start,
    legal_start_mask,
    sample_episode,
    sample_episodes,
    target_labels,
)
from .success import (
    StopParams,
    adjudicate_success,
    footprint_distance,
    proximity_sector_cells,
    stop_check,
    stop_threshold,
)
from .types import STOP_REASONS, EpisodeResult, EpisodeSpec

__all__ = [
    "MAX_STEPS",
    "STOP_REASONS",
    "SUCCESS_DISTANCE",
    "EnvConfig",
    "EpisodeResult",
    "EpisodeSpec",
    "NavEnv",
    "RandomPolicy",
    "StepOutcome",
    "StopParams",
    "adjudicate_success",
    "compute_metrics",
    "episode_record",
    "footprint_distance",
    "is_legal_start",
    "legal_start_mask",
    "proximity_sector_cells",
    "read_episode_log",
    "run_episodes",
    "sample_episode",
    "sample_episodes",
    "spl_term",
    "stop_check",
    "stop_threshold",
    "target_labels",
    "write_episode_log",
]
