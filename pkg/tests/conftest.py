import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from swarmpaint import gestures

REPO_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
FIXTURES = os.path.join(REPO_ROOT, "fixtures")


@pytest.fixture(scope="session")
def default_dataset():
    """The canonical 8x1000 seed-42 synthetic dataset."""
    return gestures.synth_dataset(seed=42)


@pytest.fixture(scope="session")
def trained_model(default_dataset):
    """Default-hyperparameter model on the seed-42 dataset (shared: ~30 s)."""
    import time

    start = time.monotonic()
    model = gestures.train_classifier(default_dataset, gestures.TrainingConfig(seed=42))
    model.metadata["train_seconds"] = time.monotonic() - start
    return model


@pytest.fixture(scope="session")
def quick_model():
    """Small, fast model for protocol and wiring tests."""
    ds = gestures.synth_dataset(per_class=120, seed=5)
    return gestures.train_classifier(ds, gestures.TrainingConfig(epochs=12, seed=5))


@pytest.fixture()
def fixtures_dir():
    return FIXTURES
