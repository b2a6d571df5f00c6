from __future__ import annotations

from dataclasses import dataclass

import torch

from ..errors import ConfigurationError


@dataclass(frozen=True)
class OptimizerConfig:
    kind: str = "adam"  # adam | sgd
    lr: float = 1e-4
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8


def make_optimizer(params, cfg: OptimizerConfig | None = None) -> torch.optim.Optimizer:
    cfg = cfg or OptimizerConfig()
    params = list(params)
    if cfg.kind == "adam":
        return torch.optim.Adam(params, lr=cfg.lr, betas=(cfg.beta1, cfg.beta2), eps=cfg.eps)
    if cfg.kind == "sgd":
        return torch.optim.SGD(params, lr=cfg.lr)
    raise ConfigurationError(f"unknown optimizer {cfg.kind!r}", field="optimizer.kind")


def optimizer_step(opt: torch.optim.Optimizer) -> int:
    """Apply one update from the populated grads, clear them, and return the step count."""
    opt.step()
    opt.zero_grad(set_to_none=False)
    opt._sscnav_steps = getattr(opt, "_sscnav_steps", 0) + 1
    return opt._sscnav_steps
