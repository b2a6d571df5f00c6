from .dataset import (
    CompletionDataset,
    CompletionSample,
    build_completion_dataset,
    collect_world_samples,
    load_dataset,
    save_dataset,
    split_by_world,
)
from .metrics import calibration_report, eval_iou, iou_report, majority_class, predict_dataset
from .model import (
    CompletedMap,
    ConfidenceMap,
    complete,
    complete_batch,
    completion_network,
    confidence_batch,
    confidence_network,
    estimate_confidence,
)
from .train import TrainConfig, TrainResult, train_completion, train_confidence

__all__ = [
    "CompletedMap",
    "CompletionDataset",
    "CompletionSample",
    "ConfidenceMap",
    "TrainConfig",
    "TrainResult",
    "build_completion_dataset",
    "calibration_report",
    "collect_world_samples",
    "complete",
    "complete_batch",
    "completion_network",
    "confidence_batch",
    "confidence_network",
    "estimate_confidence",
    "eval_iou",
    "iou_report",
    "load_dataset",
    "majority_class",
    "predict_dataset",
    "save_dataset",
    "split_by_world",
    "train_completion",
    "train_confidence",
]
