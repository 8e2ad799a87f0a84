import json

import numpy as np
import pytest

from dmr import TrainConfig, train
from dmr.data import sample_blobs
from dmr.errors import ModelError
from dmr.inference import predict_batch
from dmr.model_validator import ModelValidationError
from dmr.persistence import dumps, load_model, loads, save_model


@pytest.fixture(scope="module")
def trained():
    model, _ = train(sample_blobs(sizes=(60, 20, 8), dimensionality=3, seed=2), TrainConfig(balance=True, seed=7))
    return model


def _tampered(model, edit):
    payload = json.loads(dumps(model))
    edit(payload)
    return json.dumps(payload)


def test_round_trip_is_byte_identical(trained, tmp_path):
    path = tmp_path / "model.json"
    save_model(trained, path)
    text = path.read_text()
    assert text == dumps(trained)

    again = tmp_path / "again.json"
    save_model(load_model(path), again)
    assert again.read_text() == text


def test_round_trip_keeps_every_real_exactly(trained):
    restored = loads(dumps(trained))
    for before, after in zip(trained.clouds(), restored.clouds()):
        assert np.array_equal(before.center, after.center)
        assert before.variance == after.variance
        assert before.mean_sq_norm == after.mean_sq_norm
    assert np.array_equal(trained.standardization.per_feature_std, restored.standardization.per_feature_std)
    assert restored.ranking == trained.ranking
    assert restored.megaclouds == trained.megaclouds
    assert restored.provenance == trained.provenance


def test_round_trip_flips_no_prediction(trained):
    restored = loads(dumps(trained))
    queries = np.random.default_rng(0).normal(scale=6.0, size=(500, 3))
    before = predict_batch(trained, queries)
    after = predict_batch(restored, queries)
    assert before == after


def test_same_seed_gives_identical_files():
    dataset = sample_blobs(sizes=(30, 10), dimensionality=2, seed=3)
    first, _ = train(dataset, TrainConfig(balance=True, seed=5))
    second, _ = train(dataset, TrainConfig(balance=True, seed=5))
    assert dumps(first) == dumps(second)


def test_dangling_cloud_id_is_named(trained):
    text = _tampered(trained, lambda p: p["megaclouds"][0]["member_cloud_ids"].append(999))
    with pytest.raises(ModelValidationError, match="unknown cloud id 999") as info:
        loads(text)
    assert info.value.path == "megaclouds[0].member_cloud_ids"


def test_ranking_must_cover_every_cloud(trained):
    text = _tampered(trained, lambda p: p["ranking"]["order"].pop())
    with pytest.raises(ModelValidationError, match="permutation"):
        loads(text)


def test_duplicate_cloud_id(trained):
    def duplicate(payload):
        clouds = payload["classes"][0]["clouds"]
        clouds.append(dict(clouds[0]))
    with pytest.raises(ModelValidationError, match="duplicate cloud id"):
        loads(_tampered(trained, duplicate))


def test_version_bump_is_rejected(trained):
    text = _tampered(trained, lambda p: p.update(format_version=2))
    with pytest.raises(ModelError, match="unsupported version 2"):
        loads(text)


def test_missing_field(trained):
    text = _tampered(trained, lambda p: p.pop("provenance"))
    with pytest.raises(ModelValidationError, match="provenance: missing field"):
        loads(text)


def test_threshold_out_of_range(trained):
    with pytest.raises(ModelValidationError, match="threshold"):
        loads(_tampered(trained, lambda p: p.update(threshold=1.5)))


def test_not_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ModelError):
        load_model(path)


def test_missing_model_file(tmp_path):
    with pytest.raises(ModelError, match="cannot read model"):
        load_model(tmp_path / "absent.json")


def _edit_first_cloud(field, value):
    def edit(payload):
        payload["classes"][0]["clouds"][0][field] = value
    return edit


@pytest.mark.parametrize("value", [0.0, -1.0, "wide"])
def test_cloud_variance_must_be_positive(trained, value):
    with pytest.raises(ModelValidationError, match="variance") as info:
        loads(_tampered(trained, _edit_first_cloud("variance", value)))
    assert info.value.path == "classes[0].clouds[0].variance"


def test_cloud_id_must_be_an_integer(trained):
    with pytest.raises(ModelValidationError, match="must be an integer"):
        loads(_tampered(trained, _edit_first_cloud("id", "1")))


def test_cloud_support_must_be_an_integer(trained):
    with pytest.raises(ModelValidationError, match="support"):
        loads(_tampered(trained, _edit_first_cloud("support", 2.5)))


def test_threshold_must_be_a_number(trained):
    with pytest.raises(ModelValidationError, match="threshold"):
        loads(_tampered(trained, lambda p: p.update(threshold="high")))


def test_non_finite_center_is_rejected(trained):
    text = _tampered(trained, lambda p: p["classes"][0]["clouds"][0]["center"].__setitem__(0, 1e400))
    with pytest.raises(ModelValidationError, match="center"):
        loads(text)
