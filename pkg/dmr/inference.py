"""Validation-phase decision making: prototype ranking, the pairwise confidence cascade and the flat fallback."""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .density import similarities, similarity
from .errors import ModelError
from .model import DataCloud, DmrModel, Prediction, PrototypeTable, RankedPrototypes
from .vectors import as_matrix, as_vector, standardize_apply

logger = logging.getLogger(__name__)


def _flat_from_similarities(scores: np.ndarray, table: PrototypeTable) -> Prediction:
    best = int(np.argmax(scores))  # first maximum, i.e. lowest id
    return Prediction(label=table.labels[best], winning_cloud=int(table.ids[best]),
                      score=float(scores[best]), path=None)


def flat_predict(x, model: DmrModel, table: Optional[PrototypeTable] = None) -> Prediction:
    """Label of the most similar prototype over all classes; ties go to the lowest cloud id.

    Raises:
        ModelError: If the model has no clouds.
    """
    table = table or PrototypeTable.from_model(model)
    x = as_vector(x, model.dimensionality)
    return _flat_from_similarities(similarities(x, table.centers, table.variances), table)


def pairwise_max(x, a: DataCloud, b: DataCloud) -> Tuple[int, float]:
    """The more similar of two clouds and its similarity; a tie goes to `a`, the higher-ranked one."""
    s_a = similarity(x, a)
    s_b = similarity(x, b)
    if s_a >= s_b:
        return a.id, s_a
    return b.id, s_b


def rank_prototypes(model: DmrModel, samples, labels: Sequence[str]) -> RankedPrototypes:
    """Orders prototypes by their error on the (standardized) training set.

    A cloud's error is the share of the training samples it wins under the
    flat rule whose true label differs from the cloud's; clouds that win no
    sample have error 0. Ties are broken by larger support, then lower id.
    """
    table = PrototypeTable.from_model(model)
    matrix = as_matrix(samples)
    attracted = dict.fromkeys(table.ids.tolist(), 0)
    wrong = dict.fromkeys(table.ids.tolist(), 0)
    for x, label in zip(matrix, labels):
        winner = _flat_from_similarities(similarities(x, table.centers, table.variances), table)
        attracted[winner.winning_cloud] += 1
        if winner.label != label:
            wrong[winner.winning_cloud] += 1

    errors = {cid: (wrong[cid] / attracted[cid] if attracted[cid] else 0.0) for cid in attracted}
    clouds = model.cloud_index()
    order = sorted(errors, key=lambda cid: (errors[cid], -clouds[cid].support, cid))
    return RankedPrototypes(order=order, per_cloud_error=errors)


def _ranked_positions(model: DmrModel, table: PrototypeTable) -> np.ndarray:
    if model.ranking is None:
        raise ModelError("rank first: the model has no prototype ranking")
    return np.array([table.position(cid) for cid in model.ranking.order], dtype=int)


def _cascade(scores: np.ndarray, ranked: np.ndarray, table: PrototypeTable, threshold: float) -> Prediction:
    for pair in range(1, len(ranked)):
        a, b = ranked[pair - 1], ranked[pair]
        winner = a if scores[a] >= scores[b] else b
        if scores[winner] >= threshold:
            return Prediction(label=table.labels[winner], winning_cloud=int(table.ids[winner]),
                              score=float(scores[winner]), path=pair)
    return _flat_from_similarities(scores, table)


def cascade_predict(x, model: DmrModel, threshold: Optional[float] = None,
                    table: Optional[PrototypeTable] = None) -> Prediction:
    """Walks the overlapping ranked pairs (1,2), (2,3), ... and returns the first winner reaching the threshold.

    When no pair fires, the flat nearest-prototype decision is returned with
    `path=None`.

    Args:
        x: A standardized query vector.
        model (DmrModel): A ranked model.
        threshold (Optional[float]): Overrides `model.threshold`.
    """
    table = table or PrototypeTable.from_model(model)
    threshold = model.threshold if threshold is None else threshold
    x = as_vector(x, model.dimensionality)
    scores = similarities(x, table.centers, table.variances)
    return _cascade(scores, _ranked_positions(model, table), table, threshold)


def predict_batch(model: DmrModel, raw_samples, threshold: Optional[float] = None,
                  flat: bool = False) -> List[Prediction]:
    """Standardizes raw rows with the model's frozen parameters and predicts each one."""
    table = PrototypeTable.from_model(model)
    threshold = model.threshold if threshold is None else threshold
    matrix = standardize_apply(as_matrix(raw_samples), model.standardization)
    ranked = None if flat else _ranked_positions(model, table)

    predictions = []
    for x in matrix:
        scores = similarities(x, table.centers, table.variances)
        if flat:
            predictions.append(_flat_from_similarities(scores, table))
        else:
            predictions.append(_cascade(scores, ranked, table, threshold))
    fallbacks = sum(p.fell_back for p in predictions)
    logger.info("predicted %d sample(s), %d by flat fallback", len(predictions), fallbacks)
    return predictions
