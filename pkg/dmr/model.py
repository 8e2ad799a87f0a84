"""Dataclasses of a trained model: data clouds, class models, mega-clouds, ranking and predictions."""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import ModelError
from .vectors import RunningStats, StandardizationParams

FORMAT_VERSION = 1


@dataclass
class DataCloud:
    """A prototype and the statistics of the samples it represents.

    Attributes:
        id (int): Model-wide unique identifier.
        class_label (str): Label of the class the cloud belongs to.
        center (np.ndarray): The prototype, a running mean of absorbed samples.
        support (int): Number of absorbed samples.
        mean_sq_norm (float): Running mean of the members' squared norms.
        variance (float): Local scale used by similarity; the substituted
            floor for singleton or degenerate clouds.
        source_sample_id (Optional[int]): Training row the cloud was seeded
            from; None for synthetic or promoted clouds.
        synthetic (bool): True when the seeding sample was synthetic.
    """
    id: int
    class_label: str
    center: np.ndarray
    support: int
    mean_sq_norm: float
    variance: float
    source_sample_id: Optional[int] = None
    synthetic: bool = False

    @property
    def local_variance(self) -> float:
        """Member spread around the center, clamped at 0."""
        return max(self.mean_sq_norm - float(self.center @ self.center), 0.0)


@dataclass
class ClassModel:
    """Running statistics of one class and its ordered data clouds."""
    class_label: str
    stats: RunningStats
    clouds: List[DataCloud] = field(default_factory=list)

    def cloud(self, cloud_id: int) -> DataCloud:
        for cloud in self.clouds:
            if cloud.id == cloud_id:
                return cloud
        raise KeyError(cloud_id)

    def centers(self) -> np.ndarray:
        return np.vstack([cloud.center for cloud in self.clouds])


@dataclass
class MegaCloud:
    """A connected group of adjacent same-class data clouds."""
    id: int
    class_label: str
    member_cloud_ids: Tuple[int, ...]


@dataclass
class RankedPrototypes:
    """Prototype order used by the cascade, best (lowest training error) first."""
    order: List[int]
    per_cloud_error: Dict[int, float]


@dataclass
class Prediction:
    """Outcome of a single query.

    Attributes:
        label (str): Predicted class label.
        winning_cloud (int): Id of the prototype that decided the label.
        score (float): Similarity of the query to the winning prototype.
        path (Optional[int]): 1-based index of the ranked pair that fired, or
            None when the flat nearest-prototype fallback decided.
    """
    label: str
    winning_cloud: int
    score: float
    path: Optional[int] = None

    @property
    def fell_back(self) -> bool:
        return self.path is None

    @property
    def path_label(self) -> str:
        return "fallback" if self.path is None else f"pair:{self.path}"


@dataclass
class Provenance:
    """Settings a model was built with, plus any balancing shortfall."""
    seed: int
    balance: bool
    balance_cap: int
    cap_exhausted: Dict[str, int] = field(default_factory=dict)


@dataclass
class DmrModel:
    """A trained classifier.

    Attributes:
        dimensionality (int): Feature count n.
        standardization (StandardizationParams): Frozen training-set z-score parameters.
        classes (List[ClassModel]): One entry per class, sorted by label.
        megaclouds (Optional[List[MegaCloud]]): Set once merging has run.
        ranking (Optional[RankedPrototypes]): Set once ranking has run.
        threshold (float): Cascade confidence threshold.
        provenance (Provenance): Seed and balancing settings.
        format_version (int): Version of the serialized layout.
    """
    dimensionality: int
    standardization: StandardizationParams
    classes: List[ClassModel]
    provenance: Provenance
    threshold: float = 0.9
    megaclouds: Optional[List[MegaCloud]] = None
    ranking: Optional[RankedPrototypes] = None
    format_version: int = FORMAT_VERSION

    def clouds(self) -> List[DataCloud]:
        """All clouds of all classes, ordered by id."""
        return sorted((c for cm in self.classes for c in cm.clouds), key=lambda c: c.id)

    def cloud_index(self) -> Dict[int, DataCloud]:
        return {cloud.id: cloud for cloud in self.clouds()}

    def class_model(self, label: str) -> ClassModel:
        for class_model in self.classes:
            if class_model.class_label == label:
                return class_model
        raise KeyError(label)

    def next_cloud_id(self) -> int:
        ids = [cloud.id for cm in self.classes for cloud in cm.clouds]
        return max(ids) + 1 if ids else 1

    @property
    def n_prototypes(self) -> int:
        return sum(len(cm.clouds) for cm in self.classes)


@dataclass(frozen=True)
class PrototypeTable:
    """Column view of all clouds, ordered by id, for vectorised inference."""
    ids: np.ndarray
    centers: np.ndarray
    variances: np.ndarray
    labels: Tuple[str, ...]

    @classmethod
    def from_model(cls, model: DmrModel) -> "PrototypeTable":
        clouds = model.clouds()
        if not clouds:
            raise ModelError("empty model")
        return cls(
            ids=np.array([c.id for c in clouds], dtype=int),
            centers=np.vstack([c.center for c in clouds]),
            variances=np.array([c.variance for c in clouds], dtype=float),
            labels=tuple(c.class_label for c in clouds),
        )

    def position(self, cloud_id: int) -> int:
        return int(np.searchsorted(self.ids, cloud_id))
