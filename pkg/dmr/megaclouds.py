"""Cross-class final layer: adjacent data clouds of the same class are merged into mega-clouds."""
from collections import Counter
from typing import Dict, List, Sequence

import numpy as np

from .model import DataCloud, DmrModel, MegaCloud
from .vectors import squared_distances


class UnionFind:
    """
    Disjoint sets with union by rank and path compression.

    Examples
    --------
    >>> uf = UnionFind()
    >>> uf.union(1, 2)
    >>> uf.union(4, 5)
    >>> uf.find(2) == uf.find(1)
    True
    >>> uf.find(4) == uf.find(1)
    False
    """

    def __init__(self):
        self.parent = {}
        self.rank = Counter()

    def find(self, x):
        if x not in self.parent:
            self.parent[x] = x
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        # path compression
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        px = self.find(x)
        py = self.find(y)
        if px == py:
            return
        if self.rank[px] == self.rank[py]:
            self.parent[py] = px
            self.rank[px] += 1
        elif self.rank[px] > self.rank[py]:
            self.parent[py] = px
        else:
            self.parent[px] = py


def _adjacent(i: int, j: int, centers: np.ndarray) -> bool:
    midpoint = (centers[i] + centers[j]) / 2.0
    distances = squared_distances(midpoint, centers)
    reach = max(distances[i], distances[j])
    others = np.delete(distances, [i, j])
    return bool(np.all(others > reach))


def adjacency_test(a: DataCloud, b: DataCloud, all_clouds: Sequence[DataCloud]) -> bool:
    """True iff `a` and `b` are the two cloud centers nearest to their midpoint.

    Any other center at or inside that distance blocks adjacency.
    """
    others = [c.center for c in all_clouds if c.id not in (a.id, b.id)]
    centers = np.vstack([a.center, b.center] + others)
    return _adjacent(0, 1, centers)


def merge_megaclouds(model: DmrModel) -> List[MegaCloud]:
    """Connected components of the same-class adjacency graph over all clouds.

    Mega-cloud ids are assigned 1, 2, ... in order of each component's lowest
    member cloud id, so the result does not depend on enumeration order.
    """
    clouds = model.clouds()
    centers = np.vstack([c.center for c in clouds])
    uf = UnionFind()
    for i, cloud in enumerate(clouds):
        uf.find(cloud.id)
        for j in range(i + 1, len(clouds)):
            other = clouds[j]
            if other.class_label == cloud.class_label and _adjacent(i, j, centers):
                uf.union(cloud.id, other.id)

    components: Dict[int, List[DataCloud]] = {}
    for cloud in clouds:
        components.setdefault(uf.find(cloud.id), []).append(cloud)

    groups = sorted(components.values(), key=lambda members: min(c.id for c in members))
    return [
        MegaCloud(
            id=index,
            class_label=members[0].class_label,
            member_cloud_ids=tuple(sorted(c.id for c in members)),
        )
        for index, members in enumerate(groups, start=1)
    ]
