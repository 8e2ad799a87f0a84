import numpy as np
import pytest

from dmr import TrainConfig, augment, train, update
from dmr.data import sample_blobs
from dmr.errors import DataError
from dmr.io import Dataset


@pytest.fixture(scope="module")
def base():
    dataset = sample_blobs(sizes=(60, 20), dimensionality=3, seed=21)
    model, _ = train(dataset, TrainConfig(seed=4))
    return dataset, model


# --------------------------
# train / augment
# --------------------------

def test_train_reports_every_class(base):
    dataset, _ = base
    model, report = train(dataset, TrainConfig(seed=4))
    assert [cm.class_label for cm in model.classes] == ["class_0", "class_1"]
    assert sum(cm.stats.count for cm in model.classes) == len(dataset)
    assert any("Class 'class_1'" in line for line in report)
    assert model.megaclouds and model.ranking


def test_augment_balances_without_touching_input(base):
    dataset, model = base
    before = model.n_prototypes
    balanced, _ = augment(model, dataset, TrainConfig(balance=True, seed=4))
    assert model.n_prototypes == before
    assert len({len(cm.clouds) for cm in balanced.classes}) == 1
    assert balanced.provenance.balance


# --------------------------
# update
# --------------------------

def test_update_keeps_existing_prototypes(base):
    _, model = base
    new_rows = sample_blobs(sizes=(15, 5), dimensionality=3, seed=22)
    updated, report = update(model, new_rows)

    old_ids = [c.id for c in model.clouds()]
    new_ids = [c.id for c in updated.clouds()]
    assert set(old_ids) <= set(new_ids)
    assert new_ids == sorted(set(new_ids))
    for label in ("class_0", "class_1"):
        grown = updated.class_model(label).stats.count - model.class_model(label).stats.count
        assert grown == new_rows.labels.count(label)
    assert updated.standardization is not model.standardization
    assert np.array_equal(updated.standardization.per_feature_mean, model.standardization.per_feature_mean)
    assert len(report) >= 2


def test_update_leaves_input_model_alone(base):
    _, model = base
    counts = [cm.stats.count for cm in model.classes]
    centers = [c.center.copy() for c in model.clouds()]
    update(model, sample_blobs(sizes=(10, 10), dimensionality=3, seed=23))
    assert [cm.stats.count for cm in model.classes] == counts
    for before, after in zip(centers, model.clouds()):
        assert np.array_equal(before, after.center)


def test_update_adds_an_unseen_class(base):
    _, model = base
    rng = np.random.default_rng(3)
    new_rows = Dataset(samples=rng.normal(loc=(0.0, 0.0, 8.0), size=(12, 3)), labels=["class_new"] * 12,
                       source_ids=list(range(12)))
    updated, _ = update(model, new_rows)

    assert [cm.class_label for cm in updated.classes] == ["class_0", "class_1", "class_new"]
    new_class = updated.class_model("class_new")
    assert new_class.stats.count == 12
    assert min(c.id for c in new_class.clouds) == model.next_cloud_id()
    assert {mc.class_label for mc in updated.megaclouds} == {"class_0", "class_1", "class_new"}
    assert sorted(updated.ranking.order) == [c.id for c in updated.clouds()]


def test_update_with_balancing(base):
    _, model = base
    updated, _ = update(model, sample_blobs(sizes=(10, 10), dimensionality=3, seed=24),
                        TrainConfig(balance=True, seed=2))
    assert len({len(cm.clouds) for cm in updated.classes}) == 1
    assert updated.provenance.balance


def test_update_overrides_threshold(base):
    _, model = base
    updated, _ = update(model, sample_blobs(sizes=(5, 5), dimensionality=3, seed=25), TrainConfig(threshold=0.5))
    assert updated.threshold == 0.5


def test_update_rejects_wrong_dimensionality(base):
    _, model = base
    with pytest.raises(DataError, match="dimension mismatch"):
        update(model, sample_blobs(sizes=(5, 5), dimensionality=2, seed=26))


def test_update_needs_labels(base):
    _, model = base
    with pytest.raises(DataError):
        update(model, Dataset(samples=np.zeros((2, 3)), labels=None, source_ids=[0, 1]))
