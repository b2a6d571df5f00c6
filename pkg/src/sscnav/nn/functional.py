"""Masked losses, softmax, and a guarded backward pass."""

from __future__ import annotations

import torch
from torch.nn import functional as F

from ..errors import DataError, UsageError


def softmax(logits: torch.Tensor, dim: int = 1) -> torch.Tensor:
    return torch.softmax(logits, dim=dim)


def _batched(x, target, mask):
    if x.dim() == target.dim() + 1 and x.dim() == 3:
        x, target, mask = x.unsqueeze(0), target.unsqueeze(0), mask.unsqueeze(0)
    return x, target, mask


def cross_entropy_masked(logits: torch.Tensor, target: torch.Tensor, mask: torch.Tensor,
                         weight: torch.Tensor | None = None) -> torch.Tensor:
    """Mean per-pixel cross-entropy over pixels where ``mask`` is true.

    ``logits`` is (B, C, H, W) or (C, H, W); ``target`` holds class ids of the
    matching (B, H, W) / (H, W) shape. An empty mask yields 0. Only masked
    pixels are gathered before any arithmetic, so values outside the mask
    cannot influence the result, not even in the last bit. An optional
    per-class ``weight`` gives the weighted mean.
    """
    logits, target, mask = _batched(logits, target, mask)
    n_classes = logits.shape[1]
    target = target.long()
    if target.numel() and (int(target.max()) >= n_classes or int(target.min()) < 0):
        raise DataError(f"target label outside [0, {n_classes})")
    mask = mask.bool()
    if not bool(mask.any()):
        return logits.sum() * 0.0
    picked = logits.permute(0, 2, 3, 1)[mask]  # (P, C)
    return F.cross_entropy(picked, target[mask], weight=weight, reduction="mean")


def mse_masked(pred: torch.Tensor, target: torch.Tensor, mask: torch.Tensor) -> torch.Tensor:
    """Mean squared error over masked pixels; 0 when the mask is empty."""
    if pred.shape != target.shape or pred.shape != mask.shape:
        raise DataError(f"shape mismatch {tuple(pred.shape)} / {tuple(target.shape)} / {tuple(mask.shape)}")
    mask = mask.bool()
    if not bool(mask.any()):
        return pred.sum() * 0.0
    diff = pred[mask] - target[mask].to(pred.dtype)
    return (diff * diff).mean()


def backward(loss: torch.Tensor) -> None:
    """Populate ``.grad`` on every parameter reachable from ``loss``.

    Raises UsageError for non-scalar losses and for a second call on the
    same graph without a fresh forward pass.
    """
    if loss.dim() != 0:
        raise UsageError(f"backward needs a scalar loss, got shape {tuple(loss.shape)}")
    if getattr(loss, "_sscnav_consumed", False):
        raise UsageError("backward called twice on the same graph; run forward again")
    try:
        loss.backward()
    except RuntimeError as exc:
        if "second time" in str(exc):
            raise UsageError("backward called twice on the same graph; run forward again") from exc
        raise
    loss._sscnav_consumed = True
