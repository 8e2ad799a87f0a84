import numpy as np
import pytest

from dmr.errors import DataError
from dmr.vectors import (RunningStats, squared_distance, standardize_apply, standardize_fit,
                         update_running_stats)


# --------------------------
# Standardization
# --------------------------

def test_standardize_fit_population_statistics():
    p = standardize_fit([[0.0], [2.0]])
    assert p.per_feature_mean.tolist() == [1.0]
    assert p.per_feature_std.tolist() == [1.0]

    p = standardize_fit([[0.0, 0.0], [2.0, 4.0]])
    assert p.per_feature_mean.tolist() == [1.0, 2.0]
    assert p.per_feature_std.tolist() == [1.0, 2.0]


def test_standardize_fit_constant_feature_passes_through():
    p = standardize_fit([[5.0], [5.0]])
    assert p.per_feature_mean.tolist() == [5.0]
    assert p.per_feature_std.tolist() == [1.0]
    assert standardize_apply([7.0], p).tolist() == [2.0]


def test_standardize_fit_errors():
    with pytest.raises(DataError, match="no samples"):
        standardize_fit([])
    with pytest.raises(DataError, match="dimension mismatch"):
        standardize_fit([[1.0, 2.0], [1.0]])
    with pytest.raises(DataError):
        standardize_fit([[1.0, np.nan]])


def test_standardize_apply():
    p = standardize_fit([[0.0, 0.0], [2.0, 4.0]])
    assert standardize_apply([3.0, 6.0], p).tolist() == [2.0, 2.0]
    assert standardize_apply(p.per_feature_mean, p).tolist() == [0.0, 0.0]

    p1 = standardize_fit([[0.0], [2.0]])
    assert standardize_apply([0.0], p1).tolist() == [-1.0]

    with pytest.raises(DataError, match="dimension mismatch"):
        standardize_apply([1.0, 2.0, 3.0], p)


def test_standardize_apply_on_own_mean_is_zero():
    rng = np.random.default_rng(3)
    samples = rng.normal(4.0, 3.0, size=(40, 6))
    p = standardize_fit(samples)
    assert np.all(standardize_apply(p.per_feature_mean, p) == 0.0)


# --------------------------
# Running statistics
# --------------------------

def test_update_running_stats_hand_example():
    s = update_running_stats(RunningStats.empty(1), [2.0])
    assert s.count == 1
    assert s.mean.tolist() == [2.0]
    assert s.variance == 0.0

    s = update_running_stats(s, [4.0])
    assert s.count == 2
    assert s.mean.tolist() == [3.0]
    assert s.mean_sq_norm == 10.0
    assert s.variance == 1.0


def test_update_running_stats_is_value_semantic():
    s0 = RunningStats.empty(2)
    s1 = update_running_stats(s0, [1.0, 1.0])
    assert s0.count == 0
    assert s0.mean.tolist() == [0.0, 0.0]
    assert s1.count == 1


def test_update_running_stats_rejects_non_finite():
    with pytest.raises(DataError):
        update_running_stats(RunningStats.empty(2), [1.0, np.inf])


def _batch(samples):
    mean = samples.mean(axis=0)
    return mean, max(float(np.mean(np.sum(samples ** 2, axis=1))) - float(mean @ mean), 0.0)


def test_streaming_matches_batch_for_fifty_vectors():
    rng = np.random.default_rng(0)
    samples = rng.normal(size=(50, 4))
    s = RunningStats.empty(4)
    for x in samples:
        s = update_running_stats(s, x)
    mean, variance = _batch(samples)
    assert np.allclose(s.mean, mean, rtol=0, atol=1e-9)
    assert abs(s.variance - variance) < 1e-9


def test_streaming_matches_batch_on_random_streams():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        length = int(rng.integers(1, 501))
        dim = int(rng.integers(1, 65))
        samples = rng.normal(size=(length, dim))
        s = RunningStats.empty(dim)
        for x in samples:
            s = update_running_stats(s, x)
        mean, variance = _batch(samples)
        assert s.count == length
        assert np.allclose(s.mean, mean, rtol=0, atol=1e-9)
        assert abs(s.variance - variance) < 1e-9
        assert s.variance >= 0.0


def test_final_mean_is_order_independent():
    rng = np.random.default_rng(5)
    samples = rng.normal(size=(30, 3))
    forward, backward = RunningStats.empty(3), RunningStats.empty(3)
    for x in samples:
        forward = update_running_stats(forward, x)
    for x in samples[::-1]:
        backward = update_running_stats(backward, x)
    assert np.allclose(forward.mean, backward.mean, rtol=0, atol=1e-9)


def test_variance_zero_iff_identical_samples():
    s = RunningStats.empty(2)
    for _ in range(5):
        s = update_running_stats(s, [1.5, -2.0])
    assert s.variance < 1e-9

    s = update_running_stats(s, [1.5, -1.0])
    assert s.variance > 1e-9


# --------------------------
# Distances
# --------------------------

def test_squared_distance():
    assert squared_distance([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert squared_distance([0.0, 0.0], [3.0, 4.0]) == 25.0
    with pytest.raises(DataError, match="dimension mismatch"):
        squared_distance([0.0], [1.0, 2.0])


def test_squared_distance_is_symmetric():
    rng = np.random.default_rng(11)
    for _ in range(100):
        a, b = rng.normal(size=(2, 7))
        assert squared_distance(a, b) == squared_distance(b, a)
