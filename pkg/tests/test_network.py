import numpy as np
import pytest

from swarmpaint.errors import ConfigError, ModelError
from swarmpaint.gestures import (
    GestureClass,
    GestureModel,
    HandFrame,
    TrainingConfig,
    canonical_pose,
    classify,
    evaluate,
    extract_features,
    load_model,
    save_model,
    softmax,
    synth_dataset,
    train_classifier,
)

QUICK = TrainingConfig(epochs=12, seed=5)


@pytest.fixture(scope="module")
def small_dataset():
    return synth_dataset(per_class=120, seed=5)


@pytest.fixture(scope="module")
def small_model(small_dataset):
    return train_classifier(small_dataset, QUICK)


def test_canonical_poses_classified(small_model):
    for cls in GestureClass:
        feats = extract_features(HandFrame(canonical_pose(cls)))
        label, conf = classify(small_model, feats)
        assert label is cls
        assert 0.0 <= conf <= 1.0


def test_softmax_confidences_sum_to_one(small_model):
    feats = extract_features(HandFrame(canonical_pose(GestureClass.ROCK)))
    probs = softmax(small_model.logits(feats))[0]
    assert probs.sum() == pytest.approx(1.0, abs=1e-6)


def test_uniform_logit_model_confidence():
    dims = [(225, 8)]
    model = GestureModel([np.zeros(d) for d in dims], [np.zeros(8)])
    label, conf = classify(model, np.zeros(225))
    assert label is GestureClass.ONE  # ties break to the lowest class index
    assert conf == pytest.approx(1 / 8)


def test_argmax_shift_invariance(small_model):
    feats = extract_features(HandFrame(canonical_pose(GestureClass.OKAY)))
    logits = small_model.logits(feats)
    assert np.argmax(logits) == np.argmax(logits + 123.456)


def test_width_mismatch(small_model):
    with pytest.raises(ModelError):
        small_model.logits(np.zeros(10))


def test_training_determinism(small_dataset):
    a = train_classifier(small_dataset, QUICK)
    b = train_classifier(small_dataset, QUICK)
    assert a.checksum() == b.checksum()
    assert a.metadata["history"] == b.metadata["history"]


def test_single_class_dataset_flagged():
    ds = synth_dataset(per_class=40, seed=2, classes=["FIVE"])
    model = train_classifier(ds, TrainingConfig(epochs=5, seed=2))
    assert model.metadata["degenerate_training"] is True
    acc, _ = evaluate(model, ds.test)
    assert acc == 1.0


def test_evaluate_confusion_structure(small_model, small_dataset):
    acc, confusion = evaluate(small_model, small_dataset.test)
    assert confusion.shape == (8, 8)
    assert confusion.sum() == len(small_dataset.test)
    counts = small_dataset.test.label_array()
    for cls in range(8):
        assert confusion[cls].sum() == (counts == cls).sum()
    assert acc == pytest.approx(np.trace(confusion) / confusion.sum())


def test_always_one_model_on_balanced_set(small_dataset):
    weights = [np.zeros((225, 8))]
    biases = [np.array([1000.0, 0, 0, 0, 0, 0, 0, 0])]
    acc, confusion = evaluate(GestureModel(weights, biases), small_dataset.test)
    assert acc == pytest.approx(1 / 8)
    assert confusion[:, 0].sum() == len(small_dataset.test)


def test_empty_split_rejected(small_model):
    ds = synth_dataset(per_class=4, seed=1)
    empty = ds.subset("nope")
    with pytest.raises(ConfigError):
        evaluate(small_model, empty)


def test_model_file_round_trip(tmp_path, small_model):
    path = tmp_path / "model.json"
    save_model(small_model, path)
    loaded = load_model(path)
    assert loaded.checksum() == small_model.checksum()
    assert loaded.metadata["seed"] == small_model.metadata["seed"]


def test_loader_rejects_unknown_version(tmp_path, small_model):
    path = tmp_path / "model.json"
    save_model(small_model, path)
    doc = path.read_text().replace('"version": 1', '"version": 99')
    path.write_text(doc)
    with pytest.raises(ConfigError):
        load_model(path)
