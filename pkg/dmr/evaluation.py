"""Accuracy metric and the repeated stratified train/test evaluation protocol."""
import hashlib
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd

from .config import EvalConfig, resolve_seed
from .core import train
from .errors import DataError
from .inference import predict_batch
from .io import Dataset
from .persistence import dumps

logger = logging.getLogger(__name__)


def accuracy(predictions: Sequence[str], truth: Sequence[str]) -> float:
    """Exact-match rate of predicted against true labels.

    Raises:
        DataError: On a length mismatch or empty input.
    """
    if len(predictions) != len(truth):
        raise DataError(f"length mismatch: {len(predictions)} predictions, {len(truth)} labels")
    if len(truth) == 0:
        raise DataError("no predictions to score")
    matches = sum(p == t for p, t in zip(predictions, truth))
    return matches / len(truth)


def stratified_split(labels: Sequence[str], split: float,
                     rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """Random per-class partition placing about `split` of each class in training.

    Every class keeps at least one sample on each side. Both index arrays are
    returned in ascending order, so training sees rows in dataset order.

    Raises:
        DataError: If a class has fewer than 2 samples.
    """
    labels = np.asarray(labels)
    train_parts, test_parts = [], []
    for label in sorted(set(labels.tolist())):
        indices = np.flatnonzero(labels == label)
        if indices.size < 2:
            raise DataError(f"class '{label}' has fewer than 2 samples and cannot be split")
        n_train = int(np.clip(round(split * indices.size), 1, indices.size - 1))
        shuffled = rng.permutation(indices)
        train_parts.append(shuffled[:n_train])
        test_parts.append(shuffled[n_train:])
    return np.sort(np.concatenate(train_parts)), np.sort(np.concatenate(test_parts))


@dataclass
class EvalReport:
    """Outcome of `evaluate`.

    Attributes:
        accuracy (float): Pooled exact-match accuracy (trace of `confusion` over its total).
        per_class_accuracy (Dict[str, float]): Pooled recall per class.
        confusion (pd.DataFrame): Pooled counts, rows true labels, columns predicted.
        n_prototypes (int): Mean prototype count over repetitions, rounded.
        n_megaclouds (int): Mean mega-cloud count over repetitions, rounded.
        fold_accuracies (List[float]): Accuracy of each repetition.
        fold_prototypes (List[int]): Prototype count of each repetition.
        fold_megaclouds (List[int]): Mega-cloud count of each repetition.
        model_digests (List[str]): SHA-256 of each repetition's serialized model.
    """
    accuracy: float
    per_class_accuracy: Dict[str, float]
    confusion: pd.DataFrame
    n_prototypes: int
    n_megaclouds: int
    fold_accuracies: List[float] = field(default_factory=list)
    fold_prototypes: List[int] = field(default_factory=list)
    fold_megaclouds: List[int] = field(default_factory=list)
    model_digests: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "per_class_accuracy": dict(self.per_class_accuracy),
            "confusion": {str(t): {str(p): int(v) for p, v in row.items()}
                          for t, row in self.confusion.to_dict(orient="index").items()},
            "n_prototypes": self.n_prototypes,
            "n_megaclouds": self.n_megaclouds,
            "fold_accuracies": list(self.fold_accuracies),
            "fold_prototypes": list(self.fold_prototypes),
            "fold_megaclouds": list(self.fold_megaclouds),
            "model_digests": list(self.model_digests),
        }


def evaluate(dataset: Dataset, config: EvalConfig = None) -> EvalReport:
    """Repeated stratified train/test evaluation of the full training pipeline.

    Each repetition draws its own split, fits standardization and prototypes on
    the training rows only, optionally balances, merges, ranks, and predicts
    the test rows. Every random stream derives from `config.seed`.

    Raises:
        DataError: If a class has fewer than 2 samples.
    """
    config = config or EvalConfig()
    if dataset.labels is None:
        raise DataError("evaluation needs a labelled dataset")
    classes = dataset.classes
    for label in classes:
        if dataset.labels.count(label) < 2:
            raise DataError(f"class '{label}' has fewer than 2 samples and cannot be split")

    root = np.random.SeedSequence(resolve_seed(config.seed))
    truth_all: List[str] = []
    predicted_all: List[str] = []
    report = EvalReport(accuracy=0.0, per_class_accuracy={}, confusion=pd.DataFrame(),
                        n_prototypes=0, n_megaclouds=0)

    for repetition, child in enumerate(root.spawn(config.repeats), start=1):
        split_stream, train_stream = child.spawn(2)
        train_idx, test_idx = stratified_split(dataset.labels, config.split, np.random.default_rng(split_stream))
        train_seed = int(train_stream.generate_state(1)[0])

        model, _ = train(dataset.subset(train_idx), config.train_config(train_seed))
        test = dataset.subset(test_idx)
        predictions = [p.label for p in predict_batch(model, test.samples, flat=config.flat)]

        report.fold_accuracies.append(accuracy(predictions, test.labels))
        report.fold_prototypes.append(model.n_prototypes)
        report.fold_megaclouds.append(len(model.megaclouds))
        report.model_digests.append(hashlib.sha256(dumps(model).encode("utf-8")).hexdigest())
        truth_all.extend(test.labels)
        predicted_all.extend(predictions)
        logger.info("repetition %d/%d: accuracy %.4f", repetition, config.repeats, report.fold_accuracies[-1])

    confusion = pd.crosstab(pd.Series(truth_all, name="truth"), pd.Series(predicted_all, name="predicted"))
    confusion = confusion.reindex(index=classes, columns=classes, fill_value=0)
    diagonal = pd.Series(np.diag(confusion.to_numpy()), index=classes)
    report.confusion = confusion
    report.accuracy = float(diagonal.sum() / confusion.to_numpy().sum())
    report.per_class_accuracy = (diagonal / confusion.sum(axis=1)).astype(float).to_dict()
    report.n_prototypes = int(round(float(np.mean(report.fold_prototypes))))
    report.n_megaclouds = int(round(float(np.mean(report.fold_megaclouds))))
    return report
