"""Completion and confidence networks and their map-level wrappers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch

from ..errors import ConfigurationError
from ..nn import Network, build_network, encoder_decoder_spec
from ..perception import EgoSemMap

DEFAULT_WIDTHS = (32, 64, 128, 256, 256)


def completion_network(n_categories: int, size: int, widths=DEFAULT_WIDTHS, seed: int = 0) -> Network:
    c = n_categories + 1
    return build_network(encoder_decoder_spec(c, c, size, tuple(widths)), seed)


def confidence_network(n_categories: int, size: int, widths=DEFAULT_WIDTHS, seed: int = 1) -> Network:
    """Input: one-hot observation stacked with the completion softmax; output: one logit per cell."""
    c = n_categories + 1
    return build_network(encoder_decoder_spec(2 * c, 1, size, tuple(widths)), seed)


@dataclass
class CompletedMap:
    logits: np.ndarray  # (N + 1, R, R)
    labels: np.ndarray  # (R, R) argmax
    composited: np.ndarray  # (R, R) input labels on observed cells, predictions elsewhere

    def probabilities(self) -> np.ndarray:
        z = self.logits - self.logits.max(axis=0, keepdims=True)
        e = np.exp(z)
        return e / e.sum(axis=0, keepdims=True)


@dataclass
class ConfidenceMap:
    values: np.ndarray  # (R, R) in [0, 1]


def one_hot_batch(labels: np.ndarray, n_classes: int) -> torch.Tensor:
    """(B, R, R) uint8 labels -> (B, C, R, R) float32 one-hot."""
    lab = torch.from_numpy(np.asarray(labels, dtype=np.int64))
    return torch.nn.functional.one_hot(lab, n_classes).permute(0, 3, 1, 2).float()


def _check_size(net: Network, size: int):
    want = net.spec.input_size
    if want is not None and want != size:
        raise ConfigurationError(f"map size {size} does not match network input size {want}")


@torch.no_grad()
def complete_batch(net: Network, labels: np.ndarray, n_categories: int) -> torch.Tensor:
    """Logits (B, N+1, R, R) for a batch of input label grids."""
    _check_size(net, labels.shape[-1])
    return net(one_hot_batch(labels, n_categories + 1))


def composite(input_labels: np.ndarray, predicted: np.ndarray, n_categories: int) -> np.ndarray:
    observed = input_labels != n_categories
    return np.where(observed, input_labels, predicted).astype(np.uint8)


def complete(net: Network, o_t: EgoSemMap) -> CompletedMap:
    logits = complete_batch(net, o_t.labels[None], o_t.n_categories)[0].numpy()
    pred = logits.argmax(axis=0).astype(np.uint8)
    return CompletedMap(logits, pred, composite(o_t.labels, pred, o_t.n_categories))


def confidence_input(input_labels: np.ndarray, logits: torch.Tensor, n_categories: int) -> torch.Tensor:
    return torch.cat([one_hot_batch(input_labels, n_categories + 1), torch.softmax(logits, dim=1)], dim=1)


def confidence_from_logits(raw: torch.Tensor, input_labels: np.ndarray, n_categories: int) -> np.ndarray:
    """Sigmoid, clamp to [0, 1], then force observed cells to exactly 1."""
    values = torch.sigmoid(raw[:, 0]).clamp(0.0, 1.0).numpy()
    values[np.asarray(input_labels) != n_categories] = 1.0
    return values


@torch.no_grad()
def confidence_batch(cnet: Network, input_labels: np.ndarray, logits: torch.Tensor,
                     n_categories: int) -> np.ndarray:
    _check_size(cnet, input_labels.shape[-1])
    raw = cnet(confidence_input(input_labels, logits, n_categories))
    return confidence_from_logits(raw, input_labels, n_categories)


def estimate_confidence(cnet: Network, o_t: EgoSemMap, completed: CompletedMap) -> ConfidenceMap:
    if completed.logits.shape[1:] != o_t.labels.shape:
        raise ConfigurationError("completed map and observation differ in size")
    logits = torch.from_numpy(completed.logits[None])
    return ConfidenceMap(confidence_batch(cnet, o_t.labels[None], logits, o_t.n_categories)[0])
