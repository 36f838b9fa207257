"""Feed-forward gesture classifier trained with mini-batch Adam.

Small enough (225-64-32-8 by default) to train in seconds on a CPU while
comfortably separating the eight gesture classes.  Training is strictly
deterministic for a fixed seed: weight init, batch shuffling and the
update order all come from one seeded generator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError, ModelError
from .dataset import GestureDataset
from .features import FEATURE_SIZE, extract_features_batch
from .poses import GESTURE_NAMES, GestureClass

MODEL_FORMAT = "swarmpaint-gesture-model"
MODEL_VERSION = 1

N_CLASSES = len(GestureClass)


@dataclass
class TrainingConfig:
    hidden: tuple[int, ...] = (64, 32)
    epochs: int = 100
    batch_size: int = 32
    learning_rate: float = 1e-3
    seed: int = 0


@dataclass
class GestureModel:
    """Layer weights (row-major, in_dim x out_dim) + biases + training metadata."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]
    metadata: dict = field(default_factory=dict)

    @property
    def input_size(self) -> int:
        return self.weights[0].shape[0]

    @property
    def output_size(self) -> int:
        return self.weights[-1].shape[1]

    def logits(self, features: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(features, dtype=float))
        if x.shape[1] != self.input_size:
            raise ModelError(f"expected {self.input_size} features, got {x.shape[1]}")
        for w, b in zip(self.weights[:-1], self.biases[:-1]):
            x = np.maximum(x @ w + b, 0.0)
        return x @ self.weights[-1] + self.biases[-1]

    def checksum(self) -> str:
        import hashlib

        h = hashlib.sha256()
        for w, b in zip(self.weights, self.biases):
            h.update(np.ascontiguousarray(w).tobytes())
            h.update(np.ascontiguousarray(b).tobytes())
        return h.hexdigest()


def softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def classify(model: GestureModel, features: np.ndarray) -> tuple[GestureClass, float]:
    """Most probable gesture and its softmax confidence."""
    probs = softmax(model.logits(features))[0]
    idx = int(np.argmax(probs))  # argmax takes the lowest index on ties
    return GestureClass(idx), float(probs[idx])


def _dataset_matrices(data: GestureDataset) -> tuple[np.ndarray, np.ndarray]:
    x = extract_features_batch(data.landmark_array())
    y = data.label_array()
    return x, y


def train_classifier(data: GestureDataset, config: TrainingConfig | None = None) -> GestureModel:
    """Minimize cross-entropy over the train split; returns loss history in metadata."""
    cfg = config or TrainingConfig()
    train = data.train if data.split else data
    if len(train) == 0:
        raise ConfigError("empty training split")
    x_train, y_train = _dataset_matrices(train)
    classes_present = np.unique(y_train)
    degenerate = len(classes_present) < 2

    test = data.test if data.split else GestureDataset([], [], [])
    x_test, y_test = (None, None)
    if len(test):
        x_test, y_test = _dataset_matrices(test)

    rng = np.random.default_rng(cfg.seed)
    dims = [FEATURE_SIZE, *cfg.hidden, N_CLASSES]
    weights = [
        rng.normal(0.0, np.sqrt(2.0 / dims[i]), size=(dims[i], dims[i + 1]))
        for i in range(len(dims) - 1)
    ]
    biases = [np.zeros(dims[i + 1]) for i in range(len(dims) - 1)]

    # Adam state
    mw = [np.zeros_like(w) for w in weights]
    vw = [np.zeros_like(w) for w in weights]
    mb = [np.zeros_like(b) for b in biases]
    vb = [np.zeros_like(b) for b in biases]
    beta1, beta2, eps = 0.9, 0.999, 1e-8
    step = 0

    n = len(x_train)
    history: dict[str, list[float]] = {"train_loss": [], "test_loss": []}
    for _ in range(cfg.epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        for start in range(0, n, cfg.batch_size):
            idx = order[start : start + cfg.batch_size]
            xb, yb = x_train[idx], y_train[idx]

            # forward, keeping hidden activations for backprop
            acts = [xb]
            h = xb
            for w, b in zip(weights[:-1], biases[:-1]):
                h = np.maximum(h @ w + b, 0.0)
                acts.append(h)
            logits = h @ weights[-1] + biases[-1]
            probs = softmax(logits)
            batch_loss = -np.log(np.clip(probs[np.arange(len(yb)), yb], 1e-12, None))
            epoch_loss += float(batch_loss.sum())

            # backward
            grad = probs
            grad[np.arange(len(yb)), yb] -= 1.0
            grad /= len(yb)
            grads_w = []
            grads_b = []
            for layer in range(len(weights) - 1, -1, -1):
                grads_w.append(acts[layer].T @ grad)
                grads_b.append(grad.sum(axis=0))
                if layer > 0:
                    grad = (grad @ weights[layer].T) * (acts[layer] > 0)
            grads_w.reverse()
            grads_b.reverse()

            step += 1
            corr1 = 1.0 - beta1**step
            corr2 = 1.0 - beta2**step
            for i in range(len(weights)):
                mw[i] = beta1 * mw[i] + (1 - beta1) * grads_w[i]
                vw[i] = beta2 * vw[i] + (1 - beta2) * grads_w[i] ** 2
                weights[i] -= cfg.learning_rate * (mw[i] / corr1) / (np.sqrt(vw[i] / corr2) + eps)
                mb[i] = beta1 * mb[i] + (1 - beta1) * grads_b[i]
                vb[i] = beta2 * vb[i] + (1 - beta2) * grads_b[i] ** 2
                biases[i] -= cfg.learning_rate * (mb[i] / corr1) / (np.sqrt(vb[i] / corr2) + eps)

        history["train_loss"].append(epoch_loss / n)
        if x_test is not None:
            history["test_loss"].append(_mean_loss(weights, biases, x_test, y_test))

    model = GestureModel(
        weights,
        biases,
        metadata={
            "seed": cfg.seed,
            "epochs": cfg.epochs,
            "batch_size": cfg.batch_size,
            "learning_rate": cfg.learning_rate,
            "hidden": list(cfg.hidden),
            "classes": GESTURE_NAMES,
            "history": history,
            "degenerate_training": degenerate,
        },
    )
    return model


def _mean_loss(weights, biases, x, y) -> float:
    h = x
    for w, b in zip(weights[:-1], biases[:-1]):
        h = np.maximum(h @ w + b, 0.0)
    probs = softmax(h @ weights[-1] + biases[-1])
    return float(-np.log(np.clip(probs[np.arange(len(y)), y], 1e-12, None)).mean())


def evaluate(model: GestureModel, data: GestureDataset) -> tuple[float, np.ndarray]:
    """Accuracy and the 8x8 confusion matrix (rows = true class)."""
    if len(data) == 0:
        raise ConfigError("empty evaluation split")
    x, y = _dataset_matrices(data)
    pred = np.argmax(model.logits(x), axis=1)
    confusion = np.zeros((N_CLASSES, N_CLASSES), dtype=np.int64)
    np.add.at(confusion, (y, pred), 1)
    accuracy = float(np.trace(confusion) / len(y))
    return accuracy, confusion


def save_model(model: GestureModel, path) -> None:
    doc = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "dims": [model.input_size] + [w.shape[1] for w in model.weights],
        "weights": [w.tolist() for w in model.weights],
        "biases": [b.tolist() for b in model.biases],
        "metadata": model.metadata,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)


def load_model(path) -> GestureModel:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != MODEL_FORMAT:
        raise ConfigError(f"not a gesture model file: {path}")
    if doc.get("version") != MODEL_VERSION:
        raise ConfigError(f"unsupported model version {doc.get('version')}")
    weights = [np.array(w, dtype=float) for w in doc["weights"]]
    biases = [np.array(b, dtype=float) for b in doc["biases"]]
    for w in weights + biases:
        if not np.all(np.isfinite(w)):
            raise ModelError("model weights must be finite")
    if weights[-1].shape[1] != N_CLASSES:
        raise ModelError(f"output layer must have width {N_CLASSES}")
    return GestureModel(weights, biases, doc.get("metadata", {}))
