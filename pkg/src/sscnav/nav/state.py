"""Variant switches and navigation-state assembly.

A state stacks three blocks at map resolution: the (completed) semantic map
as N+1 probability channels, one confidence channel, and the goal category
as N+1 spatially constant one-hot channels.

States are kept in a compact uint8 form (probabilities and confidence
quantised to 1/255) so the replay buffer fits in memory; the learner and the
actor both decode the same compact form, so they see identical inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch

from ..completion.model import CompletedMap, ConfidenceMap, confidence_batch, one_hot_batch
from ..errors import ConfigurationError
from ..nn import Network
from ..perception import EgoSemMap

CONFIDENCE_MODES = ("learned", "binary_visibility", "none")
ACTION_MODES = ("spatial", "sparse8")


@dataclass(frozen=True)
class VariantConfig:
    use_completion: bool = True
    confidence_mode: str = "learned"
    action_mode: str = "spatial"

    def validate(self) -> "VariantConfig":
        if self.confidence_mode not in CONFIDENCE_MODES:
            raise ConfigurationError(f"unknown confidence mode {self.confidence_mode!r}", "confidence_mode")
        if self.action_mode not in ACTION_MODES:
            raise ConfigurationError(f"unknown action mode {self.action_mode!r}", "action_mode")
        if not self.use_completion and self.confidence_mode == "learned":
            raise ConfigurationError("learned confidence needs completion", "confidence_mode")
        return self

    @property
    def needs_completion_net(self) -> bool:
        return self.use_completion

    @property
    def needs_confidence_net(self) -> bool:
        return self.confidence_mode == "learned"


VARIANTS = {
    "full": VariantConfig(True, "learned", "spatial"),
    "-cf": VariantConfig(False, "none", "spatial"),
    "-f": VariantConfig(True, "none", "spatial"),
    "/bc": VariantConfig(True, "binary_visibility", "spatial"),
    "/sa": VariantConfig(True, "learned", "sparse8"),
}


def variant(name: str) -> VariantConfig:
    try:
        return VARIANTS[name.lower()]
    except KeyError:
        raise ConfigurationError(f"unknown variant {name!r}; expected one of {sorted(VARIANTS)}",
                                 "variant") from None


def state_channels(n_categories: int) -> int:
    return 2 * (n_categories + 1) + 1


@dataclass
class CompactStates:
    """Batch of states: map probabilities and confidence as uint8, goals as ints."""

    maps: np.ndarray  # (B, N + 1, R, R) uint8
    confidence: np.ndarray  # (B, R, R) uint8
    goals: np.ndarray  # (B,) int64

    def __len__(self):
        return len(self.goals)

    def with_rows(self, idx, other: "CompactStates") -> "CompactStates":
        """Copy with rows ``idx`` replaced by the rows of ``other``."""
        maps, conf, goals = self.maps.copy(), self.confidence.copy(), self.goals.copy()
        maps[idx], conf[idx], goals[idx] = other.maps, other.confidence, other.goals
        return CompactStates(maps, conf, goals)

    def decode(self) -> torch.Tensor:
        """Float (B, 2(N+1)+1, R, R) network input."""
        b, c, r, _ = self.maps.shape
        maps = torch.from_numpy(self.maps).float().div_(255.0)
        conf = torch.from_numpy(self.confidence).float().div_(255.0)[:, None]
        goal = torch.zeros(b, c, r, r)
        goal[torch.arange(b), torch.from_numpy(self.goals)] = 1.0
        return torch.cat([maps, conf, goal], dim=1)


def _quantise(x: np.ndarray) -> np.ndarray:
    return np.clip(np.rint(np.asarray(x) * 255.0), 0, 255).astype(np.uint8)


def _paste(probs: np.ndarray, labels: np.ndarray, n_categories: int) -> np.ndarray:
    """Replace the distribution on observed cells by the observed one-hot."""
    observed = labels != n_categories
    hot = one_hot_batch(labels, n_categories + 1).numpy()
    return np.where(observed[:, None], hot, probs)


def _map_and_confidence(labels, probs, confidence, v: VariantConfig, n: int):
    if not v.use_completion:
        maps = one_hot_batch(labels, n + 1).numpy()
    else:
        maps = _paste(probs, labels, n)
    if v.confidence_mode == "learned":
        conf = confidence
    elif v.confidence_mode == "binary_visibility":
        conf = (labels != n).astype(np.float32)
    else:
        conf = np.zeros(labels.shape, dtype=np.float32)
    return maps, conf


def assemble_state(o_t: EgoSemMap, completed: CompletedMap | None, confidence: ConfidenceMap | None,
                   goal: int, v: VariantConfig) -> np.ndarray:
    """Float (2(N+1)+1, R, R) state for a single step.

    ``completed`` and ``confidence`` are only read when the variant uses them.
    """
    n = o_t.n_categories
    if not 0 <= goal < n:
        raise ValueError(f"goal {goal} outside [0, {n})")
    labels = o_t.labels[None]
    probs = completed.probabilities()[None] if v.use_completion else None
    if v.use_completion and completed is None:
        raise ConfigurationError("variant needs a completed map", "completion")
    if v.confidence_mode == "learned" and confidence is None:
        raise ConfigurationError("variant needs a confidence map", "confidence")
    conf = confidence.values[None] if v.confidence_mode == "learned" else None
    maps, c = _map_and_confidence(labels, probs, conf, v, n)
    goal_block = np.zeros_like(maps[0])
    goal_block[goal] = 1.0
    return np.concatenate([maps[0], c[0][None].astype(maps.dtype), goal_block]).astype(np.float32)


class StateEncoder:
    """Batched state assembly around the (frozen) completion and confidence nets."""

    def __init__(self, v: VariantConfig, n_categories: int, completion: Network | None = None,
                 confidence: Network | None = None):
        v.validate()
        if v.needs_completion_net and completion is None:
            raise ConfigurationError("variant needs a completion checkpoint", "completion")
        if v.needs_confidence_net and confidence is None:
            raise ConfigurationError("variant needs a confidence checkpoint", "confidence")
        self.variant = v
        self.n_categories = n_categories
        self.completion = completion if v.needs_completion_net else None
        self.confidence = confidence if v.needs_confidence_net else None
        for net in (self.completion, self.confidence):
            if net is not None:
                net.eval()

    @torch.no_grad()
    def encode(self, maps: list[EgoSemMap], goals) -> CompactStates:
        n = self.n_categories
        labels = np.stack([m.labels for m in maps])
        probs = conf = None
        if self.completion is not None:
            logits = self.completion(one_hot_batch(labels, n + 1))
            probs = torch.softmax(logits, dim=1).numpy()
            if self.confidence is not None:
                conf = confidence_batch(self.confidence, labels, logits, n)
        m, c = _map_and_confidence(labels, probs, conf, self.variant, n)
        return CompactStates(_quantise(m), _quantise(c), np.asarray(goals, dtype=np.int64))
