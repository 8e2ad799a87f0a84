from typing import Sequence

import numpy as np

from .io import Dataset


def sample_blobs(sizes: Sequence[int] = (200, 50, 10), dimensionality: int = 5,
                 separation: float = 8.0, spread: float = 1.0, seed: int = 0) -> Dataset:
    """Generates a seeded, imbalanced Gaussian-blob dataset for demonstrations and testing.

    Class `k` is labelled ``"class_k"`` and centred at `separation` times the
    k-th unit vector (cycling through the axes when there are more classes
    than dimensions, with a growing radius), so classes are well separated for
    the default arguments.

    Returns:
        Dataset: Rows grouped by class, with `source_ids` 0..N-1.

    Example:
        >>> from dmr.data import sample_blobs
        >>>
        >>> ds = sample_blobs(sizes=(4, 2), dimensionality=3, seed=1)
        >>> len(ds), ds.dimensionality, ds.classes
        (6, 3, ['class_0', 'class_1'])
    """
    rng = np.random.default_rng(seed)
    blocks, labels = [], []
    for k, size in enumerate(sizes):
        center = np.zeros(dimensionality)
        center[k % dimensionality] = separation * (1 + k // dimensionality)
        blocks.append(center + spread * rng.standard_normal((size, dimensionality)))
        labels.extend([f"class_{k}"] * size)
    samples = np.vstack(blocks)
    return Dataset(samples=samples, labels=labels, source_ids=list(range(len(samples))))
