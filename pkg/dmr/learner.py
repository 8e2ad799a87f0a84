"""Per-class streaming prototype identification.

Each class is learned on its own: the first sample seeds a data cloud, every
later sample either becomes a new prototype (novelty condition) or is merged
into its nearest prototype as a running mean.
"""
import logging
from dataclasses import replace
from typing import Dict, List, Optional, Sequence

import numpy as np

from .density import VARIANCE_FLOOR, densities, density
from .errors import DataError
from .model import ClassModel, DataCloud
from .vectors import RunningStats, as_matrix, squared_distances, update_running_stats

logger = logging.getLogger(__name__)


def cloud_scale(cloud: DataCloud, fallback_variance: float) -> float:
    """Scale used for similarity: the local variance, or the fallback for singleton/degenerate clouds."""
    local = cloud.local_variance
    if cloud.support > 1 and local >= VARIANCE_FLOOR:
        return local
    return max(fallback_variance, VARIANCE_FLOOR)


def seed_cloud(cloud_id: int, label: str, x: np.ndarray, fallback_variance: float,
               source_sample_id: Optional[int] = None, synthetic: bool = False) -> DataCloud:
    """Creates a singleton data cloud centred on `x`."""
    x = np.array(x, dtype=float)
    return DataCloud(
        id=cloud_id,
        class_label=label,
        center=x,
        support=1,
        mean_sq_norm=float(x @ x),
        variance=max(fallback_variance, VARIANCE_FLOOR),
        source_sample_id=source_sample_id,
        synthetic=synthetic,
    )


def is_novel(sample_density: float, prototype_densities: Sequence[float]) -> bool:
    """True when the sample's density reaches or exceeds the max, or does not exceed the min, of the prototypes'."""
    prototype_densities = np.asarray(prototype_densities, dtype=float)
    return bool(sample_density >= prototype_densities.max() or sample_density <= prototype_densities.min())


def novelty_check(x, class_model: ClassModel) -> bool:
    """Decides whether `x` starts a new data cloud.

    Densities are evaluated against the class statistics, which must already
    include `x`. A sample that coincides with an existing prototype is never
    novel: its density ties every extreme and would otherwise duplicate the
    prototype.
    """
    x = np.asarray(x, dtype=float)
    centers = class_model.centers()
    if squared_distances(x, centers).min() == 0.0:
        return False
    stats = class_model.stats
    scale = max(stats.variance, VARIANCE_FLOOR)
    return is_novel(density(x, stats.mean, scale), densities(stats.mean, centers, scale))


def assign_nearest(x, clouds: Sequence[DataCloud]) -> int:
    """Id of the cloud whose center is nearest to `x`; ties go to the lowest id.

    Raises:
        DataError: If `clouds` is empty.
    """
    if not clouds:
        raise DataError("no clouds to assign to")
    distances = squared_distances(x, np.vstack([c.center for c in clouds]))
    best = distances.min()
    return min(c.id for c, d in zip(clouds, distances) if d == best)


def update_prototype(cloud: DataCloud, x, fallback_variance: float = VARIANCE_FLOOR) -> DataCloud:
    """Merges `x` into `cloud` as a running mean and returns the updated cloud."""
    x = np.asarray(x, dtype=float)
    n = cloud.support
    updated = replace(
        cloud,
        center=(n * cloud.center + x) / (n + 1),
        support=n + 1,
        mean_sq_norm=(n * cloud.mean_sq_norm + float(x @ x)) / (n + 1),
    )
    updated.variance = cloud_scale(updated, fallback_variance)
    return updated


def absorb(class_model: ClassModel, x, new_cloud_id: int, source_sample_id: Optional[int] = None,
           synthetic: bool = False) -> int:
    """Feeds one sample through the learner, mutating `class_model`.

    Returns:
        int: Id of the cloud that received the sample; equals `new_cloud_id`
        when the sample started a new cloud.
    """
    class_model.stats = update_running_stats(class_model.stats, x)
    fallback = class_model.stats.variance
    if novelty_check(x, class_model):
        class_model.clouds.append(
            seed_cloud(new_cloud_id, class_model.class_label, x, fallback, source_sample_id, synthetic)
        )
        return new_cloud_id
    nearest = assign_nearest(x, class_model.clouds)
    position = next(i for i, c in enumerate(class_model.clouds) if c.id == nearest)
    class_model.clouds[position] = update_prototype(class_model.clouds[position], x, fallback)
    return nearest


def refresh_scales(class_model: ClassModel) -> ClassModel:
    """Re-applies the scale substitution with the class's final global variance."""
    fallback = class_model.stats.variance
    for cloud in class_model.clouds:
        cloud.variance = cloud_scale(cloud, fallback)
    return class_model


def learn_class(samples, label: str, first_cloud_id: int = 1,
                source_ids: Optional[Sequence[int]] = None) -> ClassModel:
    """Learns the data clouds of one class from an ordered, standardized sample stream.

    Args:
        samples: Standardized feature vectors of the class, in stream order.
        label (str): The class label.
        first_cloud_id (int): Id given to the first cloud; later clouds count up.
        source_ids (Optional[Sequence[int]]): Dataset row of each sample,
            recorded as provenance of the clouds they seed.

    Raises:
        DataError: If the stream is empty.
    """
    if samples is None or len(samples) == 0:
        raise DataError(f"empty stream for class '{label}'")
    matrix = as_matrix(samples)
    if source_ids is None:
        source_ids = [None] * len(matrix)

    stats = update_running_stats(RunningStats.empty(matrix.shape[1]), matrix[0])
    class_model = ClassModel(
        class_label=label,
        stats=stats,
        clouds=[seed_cloud(first_cloud_id, label, matrix[0], stats.variance, source_ids[0])],
    )
    next_id = first_cloud_id + 1
    for x, source_id in zip(matrix[1:], source_ids[1:]):
        if absorb(class_model, x, next_id, source_id) == next_id:
            next_id += 1

    refresh_scales(class_model)
    logger.debug("class '%s': %d samples -> %d clouds", label, len(matrix), len(class_model.clouds))
    return class_model


def cloud_members(class_model: ClassModel, samples) -> Dict[int, List[np.ndarray]]:
    """Partitions a class's samples among its clouds by nearest prototype."""
    members: Dict[int, List[np.ndarray]] = {cloud.id: [] for cloud in class_model.clouds}
    for x in as_matrix(samples):
        members[assign_nearest(x, class_model.clouds)].append(x)
    return members
