"""Feature-vector arithmetic, z-score standardization and recursive global statistics.

A feature vector is a one-dimensional ``numpy`` float array. All functions here
are value-semantic: inputs are never modified in place.
"""
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import DataError

FeatureVector = np.ndarray
VectorLike = Union[Sequence[float], np.ndarray]

STD_FLOOR = 1e-9


def as_vector(values: VectorLike, dimensionality: int = None) -> FeatureVector:
    """Converts `values` to a finite float vector, optionally checking its length.

    Raises:
        DataError: If the values are not finite or the length differs from
            `dimensionality`.
    """
    vector = np.asarray(values, dtype=float).reshape(-1)
    if dimensionality is not None and vector.size != dimensionality:
        raise DataError(f"dimension mismatch: expected {dimensionality}, got {vector.size}")
    if not np.all(np.isfinite(vector)):
        raise DataError("non-finite coordinate in feature vector")
    return vector


def as_matrix(samples) -> np.ndarray:
    """Stacks samples into an (N, n) float matrix.

    Raises:
        DataError: "no samples" for empty input, "dimension mismatch" for ragged
            rows, or on non-finite entries.
    """
    if samples is None or len(samples) == 0:
        raise DataError("no samples")
    if isinstance(samples, np.ndarray) and samples.ndim == 2:
        matrix = samples.astype(float, copy=False)
    else:
        lengths = {len(np.atleast_1d(s)) for s in samples}
        if len(lengths) != 1:
            raise DataError("dimension mismatch")
        matrix = np.vstack([np.asarray(s, dtype=float).reshape(-1) for s in samples])
    if not np.all(np.isfinite(matrix)):
        raise DataError("non-finite coordinate in feature vector")
    return matrix


@dataclass(frozen=True)
class StandardizationParams:
    """Frozen per-feature z-score parameters fitted on the training set.

    Attributes:
        per_feature_mean (np.ndarray): Population mean of each feature.
        per_feature_std (np.ndarray): Population standard deviation of each
            feature; entries below `STD_FLOOR` are stored as 1.
    """
    per_feature_mean: np.ndarray
    per_feature_std: np.ndarray

    @property
    def dimensionality(self) -> int:
        return int(self.per_feature_mean.size)


def standardize_fit(samples) -> StandardizationParams:
    """Fits per-feature population mean and standard deviation.

    Constant features get a standard deviation of 1 so they pass through
    centred but otherwise unchanged.

    Example:
        >>> p = standardize_fit([[0.0, 0.0], [2.0, 4.0]])
        >>> p.per_feature_mean.tolist(), p.per_feature_std.tolist()
        ([1.0, 2.0], [1.0, 2.0])
    """
    matrix = as_matrix(samples)
    mean = matrix.mean(axis=0)
    std = matrix.std(axis=0)
    std = np.where(std < STD_FLOOR, 1.0, std)
    return StandardizationParams(per_feature_mean=mean, per_feature_std=std)


def standardize_apply(x, params: StandardizationParams) -> np.ndarray:
    """Applies (x - mean) / std to a vector or to every row of a matrix."""
    arr = np.asarray(x, dtype=float)
    if arr.shape[-1] != params.dimensionality:
        raise DataError(f"dimension mismatch: expected {params.dimensionality}, got {arr.shape[-1]}")
    return (arr - params.per_feature_mean) / params.per_feature_std


@dataclass(frozen=True)
class RunningStats:
    """Recursive global statistics of a sample stream.

    Attributes:
        count (int): Number of absorbed samples.
        mean (np.ndarray): Running mean.
        mean_sq_norm (float): Running mean of the squared norms.
        variance (float): Scalar variance, mean_sq_norm - ||mean||^2, clamped at 0.
    """
    count: int
    mean: np.ndarray
    mean_sq_norm: float
    variance: float

    @classmethod
    def empty(cls, dimensionality: int) -> "RunningStats":
        return cls(count=0, mean=np.zeros(dimensionality), mean_sq_norm=0.0, variance=0.0)


def update_running_stats(stats: RunningStats, x: VectorLike) -> RunningStats:
    """Absorbs one sample and returns the updated statistics.

    Example:
        >>> s = update_running_stats(RunningStats.empty(1), [2.0])
        >>> s = update_running_stats(s, [4.0])
        >>> s.count, s.mean.tolist(), s.mean_sq_norm, s.variance
        (2, [3.0], 10.0, 1.0)
    """
    x = as_vector(x, stats.mean.size)
    n = stats.count
    mean = (n * stats.mean + x) / (n + 1)
    mean_sq_norm = (n * stats.mean_sq_norm + float(x @ x)) / (n + 1)
    variance = max(mean_sq_norm - float(mean @ mean), 0.0)
    return RunningStats(count=n + 1, mean=mean, mean_sq_norm=mean_sq_norm, variance=variance)


def squared_distance(a: VectorLike, b: VectorLike) -> float:
    """Squared Euclidean distance between two vectors of equal length."""
    a = np.asarray(a, dtype=float).reshape(-1)
    b = np.asarray(b, dtype=float).reshape(-1)
    if a.size != b.size:
        raise DataError(f"dimension mismatch: {a.size} vs {b.size}")
    diff = a - b
    return float(diff @ diff)


def squared_distances(x: VectorLike, centers: np.ndarray) -> np.ndarray:
    """Squared Euclidean distance from `x` to every row of `centers`."""
    diff = np.asarray(centers, dtype=float) - np.asarray(x, dtype=float)
    return np.einsum("ij,ij->i", diff, diff)
