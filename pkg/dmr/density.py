"""Cauchy data density, prototype similarity and discrete class typicality."""
from typing import Dict

import numpy as np

from .errors import DegenerateScaleError, ModelError
from .vectors import squared_distance, squared_distances

VARIANCE_FLOOR = 1e-6


def density(x, center, variance: float) -> float:
    """Cauchy density of `x` around `center`: 1 / (1 + ||x - center||^2 / variance).

    Raises:
        DegenerateScaleError: If `variance` is not positive.

    Example:
        >>> density([2.0, 0.0], [0.0, 0.0], 1.0)
        0.2
    """
    if not variance > 0:
        raise DegenerateScaleError("degenerate scale")
    return 1.0 / (1.0 + squared_distance(x, center) / variance)


def densities(x, centers: np.ndarray, variance: float) -> np.ndarray:
    """Vectorised `density` of `x` against each row of `centers` with a shared scale."""
    if not variance > 0:
        raise DegenerateScaleError("degenerate scale")
    return 1.0 / (1.0 + squared_distances(x, centers) / variance)


def similarity(x, cloud) -> float:
    """Similarity of `x` to a data cloud, using the cloud's own scale."""
    return density(x, cloud.center, cloud.variance)


def similarities(x, centers: np.ndarray, variances: np.ndarray) -> np.ndarray:
    """Vectorised `similarity` of `x` against many clouds at once."""
    if np.any(variances <= 0):
        raise DegenerateScaleError("degenerate scale")
    return 1.0 / (1.0 + squared_distances(x, centers) / variances)


def class_typicality(x, model) -> Dict[str, float]:
    """Discrete typicality of each class for `x`.

    Per class, sums support x similarity over its clouds and normalises the
    sums across classes.

    Raises:
        ModelError: If the model has no clouds.
    """
    scores = {}
    for class_model in model.classes:
        scores[class_model.class_label] = sum(
            cloud.support * similarity(x, cloud) for cloud in class_model.clouds
        )
    total = sum(scores.values())
    if not scores or total <= 0:
        raise ModelError("empty model")
    return {label: score / total for label, score in scores.items()}
