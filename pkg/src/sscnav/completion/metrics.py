"""Unobserved-region IoU and confidence calibration statistics."""

from __future__ import annotations

import numpy as np
import torch

from ..nn import Network
from .dataset import CompletionDataset
from .model import confidence_batch, one_hot_batch


def eval_iou(predictions, targets, masks, n_categories: int) -> dict:
    """Per-category IoU over masked cells, aggregated across the whole set.

    Categories whose union is empty are absent from ``per_category`` and do
    not enter the mean.
    """
    pred = np.asarray(predictions).reshape(-1)
    gt = np.asarray(targets).reshape(-1)
    m = np.asarray(masks, dtype=bool).reshape(-1)
    pred, gt = pred[m].astype(np.int64), gt[m].astype(np.int64)
    k = n_categories + 1
    inter = np.bincount(gt[pred == gt], minlength=k)[:n_categories]
    p_cnt = np.bincount(pred, minlength=k)[:n_categories]
    g_cnt = np.bincount(gt, minlength=k)[:n_categories]
    union = p_cnt + g_cnt - inter
    per = {c: float(inter[c] / union[c]) for c in range(n_categories) if union[c] > 0}
    mean = float(np.mean(list(per.values()))) if per else float("nan")
    return {"per_category": per, "mean": mean, "cells": int(m.sum())}


@torch.no_grad()
def predict_dataset(net: Network, ds: CompletionDataset, batch: int = 64):
    """Argmax labels and logits-derived predictions for every sample (labels only)."""
    out = np.empty_like(ds.inputs)
    for i in range(0, len(ds), batch):
        x = one_hot_batch(ds.inputs[i:i + batch], ds.n_categories + 1)
        out[i:i + batch] = net(x).argmax(dim=1).numpy().astype(np.uint8)
    return out


def majority_class(ds: CompletionDataset) -> int:
    """Most frequent target label inside the scoring region."""
    m = ds.loss_mask()
    counts = np.bincount(ds.targets[m].astype(np.int64), minlength=ds.n_categories + 1)
    return int(np.argmax(counts[:ds.n_categories]))


def iou_report(net: Network, ds: CompletionDataset, majority: int) -> dict:
    """IoU of the network against the majority-class and predict-unknown baselines."""
    mask = ds.loss_mask()
    n = ds.n_categories
    pred = predict_dataset(net, ds)
    return {
        "net": eval_iou(pred, ds.targets, mask, n),
        "majority": eval_iou(np.full_like(ds.targets, majority), ds.targets, mask, n),
        "unknown": eval_iou(np.full_like(ds.targets, n), ds.targets, mask, n),
    }


@torch.no_grad()
def calibration_report(cnet: Network, net: Network, ds: CompletionDataset, batch: int = 64) -> dict:
    """Mean confidence on correct vs incorrect cells of the scoring region."""
    n = ds.n_categories
    sums = np.zeros(2)
    counts = np.zeros(2, dtype=np.int64)
    for i in range(0, len(ds), batch):
        inp, tgt = ds.inputs[i:i + batch], ds.targets[i:i + batch]
        logits = net(one_hot_batch(inp, n + 1))
        conf = confidence_batch(cnet, inp, logits, n)
        mask = (inp == n) & (tgt != n)
        correct = logits.argmax(dim=1).numpy() == tgt
        for j, sel in enumerate((mask & ~correct, mask & correct)):
            sums[j] += conf[sel].sum()
            counts[j] += sel.sum()
    mean_wrong = sums[0] / counts[0] if counts[0] else float("nan")
    mean_right = sums[1] / counts[1] if counts[1] else float("nan")
    return {"mean_correct": float(mean_right), "mean_incorrect": float(mean_wrong),
            "gap": float(mean_right - mean_wrong), "cells": int(counts.sum())}
