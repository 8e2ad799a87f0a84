import numpy as np
import pytest

from dmr.model import ClassModel, DataCloud, DmrModel, Provenance
from dmr.vectors import RunningStats, StandardizationParams


def build_model(clouds, threshold=0.9):
    """Hand-built model from (label, center, support, variance) tuples; cloud ids follow list order from 1."""
    dim = len(clouds[0][1])
    by_label = {}
    for cloud_id, (label, center, support, variance) in enumerate(clouds, start=1):
        center = np.asarray(center, dtype=float)
        by_label.setdefault(label, []).append(DataCloud(
            id=cloud_id,
            class_label=label,
            center=center,
            support=support,
            mean_sq_norm=float(center @ center) + variance,
            variance=variance,
            source_sample_id=cloud_id - 1,
        ))
    classes = []
    for label in sorted(by_label):
        members = by_label[label]
        mean = np.mean([c.center for c in members], axis=0)
        stats = RunningStats(count=sum(c.support for c in members), mean=mean,
                             mean_sq_norm=float(mean @ mean) + 1.0, variance=1.0)
        classes.append(ClassModel(class_label=label, stats=stats, clouds=members))
    return DmrModel(
        dimensionality=dim,
        standardization=StandardizationParams(np.zeros(dim), np.ones(dim)),
        classes=classes,
        provenance=Provenance(seed=0, balance=False, balance_cap=1000),
        threshold=threshold,
    )


@pytest.fixture
def make_model():
    return build_model
