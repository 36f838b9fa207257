"""Synthetic gesture dataset: canonical poses + Gaussian landmark jitter.

Stands in for a human-recorded corpus so training is reproducible from a
seed alone.  Default size matches the reference recording protocol:
1000 frames per gesture class, split 80/20 into train/test.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError
from .hands import HandFrame
from .poses import GESTURE_NAMES, GestureClass, canonical_pose

DEFAULT_JITTER = 0.015
DEFAULT_PER_CLASS = 1000
DEFAULT_TRAIN_FRACTION = 0.8

DATASET_FORMAT = "swarmpaint-gestures"
DATASET_VERSION = 1


@dataclass
class GestureDataset:
    """Labeled hand frames with a frozen train/test split."""

    frames: list[HandFrame]
    labels: list[GestureClass]
    split: list[str] = field(default_factory=list)  # "train" | "test" per sample

    def __post_init__(self):
        if len(self.frames) != len(self.labels):
            raise ConfigError("frames and labels must have equal length")
        if self.split and len(self.split) != len(self.frames):
            raise ConfigError("split tags must cover every sample")

    def __len__(self):
        return len(self.frames)

    def subset(self, tag: str) -> "GestureDataset":
        idx = [i for i, s in enumerate(self.split) if s == tag]
        return GestureDataset(
            [self.frames[i] for i in idx],
            [self.labels[i] for i in idx],
            [tag] * len(idx),
        )

    @property
    def train(self) -> "GestureDataset":
        return self.subset("train")

    @property
    def test(self) -> "GestureDataset":
        return self.subset("test")

    def landmark_array(self) -> np.ndarray:
        return np.stack([f.landmarks for f in self.frames])

    def label_array(self) -> np.ndarray:
        return np.array([int(lbl) for lbl in self.labels], dtype=np.int64)


def synth_dataset(
    per_class: int = DEFAULT_PER_CLASS,
    jitter: float = DEFAULT_JITTER,
    seed: int = 0,
    train_fraction: float = DEFAULT_TRAIN_FRACTION,
    classes=None,
) -> GestureDataset:
    """Generate a jittered dataset; byte-identical for a fixed seed."""
    if jitter < 0:
        raise ConfigError(f"jitter must be >= 0, got {jitter}")
    if per_class <= 0:
        raise ConfigError(f"per_class must be > 0, got {per_class}")
    if not 0 < train_fraction < 1:
        raise ConfigError(f"train_fraction must be in (0, 1), got {train_fraction}")
    if classes is None:
        classes = list(GestureClass)
    else:
        try:
            classes = [GestureClass[c] if isinstance(c, str) else GestureClass(c) for c in classes]
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"unknown gesture class: {exc}") from None

    rng = np.random.default_rng(seed)
    frames: list[HandFrame] = []
    labels: list[GestureClass] = []
    split: list[str] = []
    n_train = int(round(per_class * train_fraction))
    t = 0
    for cls in classes:
        base = canonical_pose(cls)
        noise = rng.normal(0.0, jitter, size=(per_class, 21, 3)) if jitter > 0 else np.zeros((per_class, 21, 3))
        for i in range(per_class):
            frames.append(HandFrame(base + noise[i], timestamp=t / 30.0))
            labels.append(cls)
            split.append("train" if i < n_train else "test")
            t += 1
    return GestureDataset(frames, labels, split)


def save_dataset(ds: GestureDataset, path) -> None:
    """One JSON header line, then one JSON record per sample."""
    with open(path, "w", encoding="utf-8") as fh:
        header = {"format": DATASET_FORMAT, "version": DATASET_VERSION, "n": len(ds)}
        fh.write(json.dumps(header) + "\n")
        for frame, label, tag in zip(ds.frames, ds.labels, ds.split or [""] * len(ds)):
            rec = {
                "label": label.name,
                "t": frame.timestamp,
                "split": tag,
                "landmarks": [[float(v) for v in lm] for lm in frame.landmarks],
            }
            fh.write(json.dumps(rec) + "\n")


def load_dataset(path) -> GestureDataset:
    with open(path, "r", encoding="utf-8") as fh:
        header = json.loads(fh.readline())
        if header.get("format") != DATASET_FORMAT:
            raise ConfigError(f"not a gesture dataset file: {path}")
        if header.get("version") != DATASET_VERSION:
            raise ConfigError(f"unsupported dataset version {header.get('version')}")
        frames, labels, split = [], [], []
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            if rec["label"] not in GESTURE_NAMES:
                raise ConfigError(f"unknown gesture class: {rec['label']}")
            frames.append(HandFrame(np.array(rec["landmarks"]), rec.get("t", 0.0)))
            labels.append(GestureClass[rec["label"]])
            split.append(rec.get("split", ""))
    return GestureDataset(frames, labels, split)
