"""Training loops for the completion and confidence networks."""

from __future__ import annotations

import copy
import logging
from dataclasses import dataclass, field

import numpy as np
import torch

from ..errors import ConfigurationError
from ..nn import (
    Network,
    OptimizerConfig,
    backward,
    cross_entropy_masked,
    make_optimizer,
    mse_masked,
    optimizer_step,
    save_checkpoint,
)
from .dataset import CompletionDataset
from .model import confidence_input, one_hot_batch

log = logging.getLogger(__name__)


@dataclass
class TrainConfig:
    steps: int = 2000
    batch_size: int = 16
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    seed: int = 0
    eval_every: int = 200
    val_samples: int = 256
    flip_augment: bool = True
    # None: plain cross-entropy. "sqrt_inverse": class weights proportional to
    # 1/sqrt(frequency) inside the training loss mask, normalised to mean 1
    class_weighting: str | None = None


@dataclass
class TrainResult:
    net: Network
    history: list[dict]
    best_val: float
    best_step: int


def _batches(n: int, batch: int, rng: np.random.Generator):
    epoch = 0
    while True:
        order = rng.permutation(n)
        for i in range(0, n - batch + 1 if n >= batch else 1, batch):
            yield epoch, order[i:i + batch]
        epoch += 1


def _tensors(ds: CompletionDataset, idx, flip=None):
    inp, tgt = ds.inputs[idx], ds.targets[idx]
    if flip is not None and flip.any():
        inp, tgt = inp.copy(), tgt.copy()
        inp[flip] = inp[flip][:, :, ::-1]
        tgt[flip] = tgt[flip][:, :, ::-1]
    n = ds.n_categories
    mask = torch.from_numpy((inp == n) & (tgt != n))
    return inp, one_hot_batch(inp, n + 1), torch.from_numpy(tgt.astype(np.int64)), mask


def completion_loss(net: Network, ds: CompletionDataset, idx, flip=None,
                    weight: torch.Tensor | None = None) -> torch.Tensor:
    _, x, y, mask = _tensors(ds, idx, flip)
    return cross_entropy_masked(net(x), y, mask, weight)


def class_weights(ds: CompletionDataset, mode: str | None) -> torch.Tensor | None:
    """Per-class CE weights from label frequencies inside the loss mask."""
    if mode is None:
        return None
    if mode != "sqrt_inverse":
        raise ConfigurationError(f"unknown class weighting {mode!r}", "completion.class_weighting")
    n = ds.n_categories
    counts = np.bincount(ds.targets[ds.loss_mask()].astype(np.int64), minlength=n + 1)[:n + 1]
    w = np.zeros(n + 1)
    present = counts > 0
    w[present] = 1.0 / np.sqrt(counts[present] / counts.sum())
    w[present] /= w[present].mean()
    return torch.tensor(w, dtype=torch.float32)


def confidence_targets(logits: torch.Tensor, target: torch.Tensor) -> torch.Tensor:
    """Binary correctness of the argmax prediction, per cell."""
    return (logits.argmax(dim=1) == target).float()


def confidence_loss(cnet: Network, completion_net: Network, ds: CompletionDataset, idx,
                    flip=None) -> torch.Tensor:
    inp, x, y, mask = _tensors(ds, idx, flip)
    with torch.no_grad():
        logits = completion_net(x)
    correct = confidence_targets(logits, y)
    pred = torch.sigmoid(cnet(confidence_input(inp, logits, ds.n_categories))[:, 0])
    return mse_masked(pred, correct, mask)


@torch.no_grad()
def _evaluate(loss_fn, ds: CompletionDataset, batch: int) -> float:
    total, count = 0.0, 0
    n = ds.n_categories
    for i in range(0, len(ds), batch):
        idx = np.arange(i, min(i + batch, len(ds)))
        w = int(((ds.inputs[idx] == n) & (ds.targets[idx] != n)).sum())
        if w:
            total += float(loss_fn(idx)) * w
            count += w
    return total / count if count else 0.0


def _fit(net: Network, loss_fn, train: CompletionDataset, val: CompletionDataset | None,
         cfg: TrainConfig, checkpoint_path=None, name="completion") -> TrainResult:
    rng = np.random.default_rng(cfg.seed)
    opt = make_optimizer(net.parameters(), cfg.optimizer)
    if val is not None and len(val) > cfg.val_samples:
        val = val.subset(np.sort(rng.choice(len(val), cfg.val_samples, replace=False)))
    history: list[dict] = []
    best_val, best_step, best_state = float("inf"), 0, copy.deepcopy(net.state_dict())
    running, seen = 0.0, 0
    batches = _batches(len(train), min(cfg.batch_size, len(train)), rng)
    net.train()
    for step in range(1, cfg.steps + 1):
        epoch, idx = next(batches)
        flip = rng.random(len(idx)) < 0.5 if cfg.flip_augment else None
        loss = loss_fn(train, idx, flip)
        opt.zero_grad()
        backward(loss)
        optimizer_step(opt)
        running += loss.item()
        seen += 1
        if step % cfg.eval_every == 0 or step == cfg.steps:
            rec = {"step": step, "epoch": epoch, "train_loss": running / seen}
            running, seen = 0.0, 0
            if val is not None and len(val):
                net.eval()
                rec["val_loss"] = _evaluate(lambda i: loss_fn(val, i, None), val, 64)
                net.train()
                score = rec["val_loss"]
            else:
                score = rec["train_loss"]
            if score < best_val:
                best_val, best_step = score, step
                best_state = copy.deepcopy(net.state_dict())
                if checkpoint_path is not None:
                    save_checkpoint(net, checkpoint_path)
            history.append(rec)
            log.info("%s step %d epoch %d: %s", name, step, epoch, rec)
    net.load_state_dict(best_state)
    net.eval()
    return TrainResult(net, history, best_val, best_step)


def train_completion(net: Network, train: CompletionDataset, val: CompletionDataset | None = None,
                     cfg: TrainConfig | None = None, checkpoint_path=None) -> TrainResult:
    """Minimise masked cross-entropy on input-unobserved, target-observed cells.

    Keeps (and optionally writes) the parameters with the best validation
    loss, or the best training loss when no validation set is given.
    """
    cfg = cfg or TrainConfig()
    weight = class_weights(train, cfg.class_weighting)
    return _fit(net, lambda ds, idx, flip: completion_loss(net, ds, idx, flip, weight), train, val, cfg,
                checkpoint_path, "completion")


def train_confidence(cnet: Network, completion_net: Network, train: CompletionDataset,
                     val: CompletionDataset | None = None, cfg: TrainConfig | None = None,
                     checkpoint_path=None) -> TrainResult:
    """Regress per-cell correctness of a frozen completion net with masked MSE."""
    cfg = cfg or TrainConfig()
    completion_net.eval()
    for p in completion_net.parameters():
        p.requires_grad_(False)
    try:
        return _fit(cnet, lambda ds, idx, flip: confidence_loss(cnet, completion_net, ds, idx, flip),
                    train, val, cfg, checkpoint_path, "confidence")
    finally:
        for p in completion_net.parameters():
            p.requires_grad_(True)
