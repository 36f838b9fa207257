from .hands import (
    N_LANDMARKS,
    DepthCalibration,
    HandFrame,
    estimate_depth,
    hand_position,
    palm_size,
    palm_size_normalized,
)
from .features import FEATURE_SIZE, extract_features, extract_features_batch
from .poses import GESTURE_NAMES, GestureClass, canonical_pose
from .dataset import GestureDataset, load_dataset, save_dataset, synth_dataset
from .network import (
    GestureModel,
    TrainingConfig,
    classify,
    evaluate,
    load_model,
    save_model,
    softmax,
    train_classifier,
)

__all__ = [
    "N_LANDMARKS",
    "FEATURE_SIZE",
    "GESTURE_NAMES",
    "DepthCalibration",
    "HandFrame",
    "GestureClass",
    "GestureDataset",
    "GestureModel",
    "TrainingConfig",
    "canonical_pose",
    "classify",
    "estimate_depth",
    "evaluate",
    "extract_features",
    "extract_features_batch",
    "hand_position",
    "load_dataset",
    "load_model",
    "palm_size",
    "palm_size_normalized",
    "save_dataset",
    "save_model",
    "softmax",
    "synth_dataset",
    "train_classifier",
]
