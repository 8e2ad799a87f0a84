import copy
from dataclasses import replace
from typing import Dict, List, Optional, Tuple

import numpy as np

from .balancer import balance_classes, compute_deficits
from .config import TrainConfig, resolve_seed
from .errors import DataError
from .inference import rank_prototypes
from .io import Dataset
from .learner import absorb, cloud_members, learn_class, refresh_scales
from .megaclouds import merge_megaclouds
from .model import DmrModel, Provenance
from .reporting import log_info, log_warning
from .vectors import standardize_apply, standardize_fit


def _class_rows(labels: List[str]) -> Dict[str, List[int]]:
    rows: Dict[str, List[int]] = {}
    for i, label in enumerate(labels):
        rows.setdefault(label, []).append(i)
    return dict(sorted(rows.items()))


def _require_labels(dataset: Dataset):
    if dataset.labels is None:
        raise DataError("training needs a labelled dataset")
    if len(dataset) == 0:
        raise DataError("no samples")


def _finalize(model: DmrModel, standardized: np.ndarray, labels: List[str], report: List[str]) -> DmrModel:
    model.megaclouds = merge_megaclouds(model)
    model.ranking = rank_prototypes(model, standardized, labels)
    log_info(f"Merged {model.n_prototypes} prototype(s) into {len(model.megaclouds)} mega-cloud(s).", report)
    return model


def _balance(model: DmrModel, standardized: np.ndarray, labels: List[str], seed: int,
             balance_cap: int, report: List[str]) -> DmrModel:
    members = {}
    for label, rows in _class_rows(labels).items():
        members.update(cloud_members(model.class_model(label), standardized[rows]))
    deficits = compute_deficits(model)
    log_info(f"Prototype deficits before balancing: {deficits}", report)
    balanced, synthetic = balance_classes(model, members, seed=np.random.SeedSequence(seed),
                                          balance_cap=balance_cap, report=report)
    log_info(f"Generated {len(synthetic)} synthetic sample(s).", report)
    return balanced


def train(dataset: Dataset, config: Optional[TrainConfig] = None) -> Tuple[DmrModel, list[str]]:
    """Trains a classifier on a labelled dataset.

    This is the core function of the library. It fits standardization on the
    training rows, learns the data clouds of every class separately (in label
    order, rows in dataset order), optionally balances prototype counts with
    synthetic samples, merges adjacent same-class clouds into mega-clouds and
    ranks the prototypes by training error.

    Args:
        dataset (Dataset): Labelled raw feature vectors.
        config (Optional[TrainConfig]): Training settings; defaults apply when omitted.

    Returns:
        Tuple[DmrModel, list[str]]: A tuple containing:
            - **DmrModel**: The trained, ranked model.
            - **list[str]**: Report messages of the run; pass it to
              `reporting.display_report` for a table view.

    Example:
        >>> from dmr.data import sample_blobs
        >>> from dmr import train, TrainConfig
        >>> model, report = train(sample_blobs(seed=1), TrainConfig(balance=True, seed=7))
        >>> len(model.megaclouds) <= model.n_prototypes
        True
    """
    config = config or TrainConfig()
    _require_labels(dataset)
    seed = resolve_seed(config.seed)
    report: list[str] = []

    params = standardize_fit(dataset.samples)
    standardized = standardize_apply(dataset.samples, params)

    classes = []
    next_id = 1
    for label, rows in _class_rows(dataset.labels).items():
        class_model = learn_class(standardized[rows], label, first_cloud_id=next_id,
                                  source_ids=[dataset.source_ids[i] for i in rows])
        next_id += len(class_model.clouds)
        classes.append(class_model)
        log_info(f"Class '{label}': {len(rows)} sample(s) -> {len(class_model.clouds)} prototype(s).", report)

    model = DmrModel(
        dimensionality=dataset.dimensionality,
        standardization=params,
        classes=classes,
        provenance=Provenance(seed=seed, balance=config.balance, balance_cap=config.balance_cap),
        threshold=config.threshold,
    )

    if config.balance:
        model = _balance(model, standardized, dataset.labels, seed, config.balance_cap, report)

    return _finalize(model, standardized, dataset.labels, report), report


def _standardized_for(model: DmrModel, dataset: Dataset) -> np.ndarray:
    _require_labels(dataset)
    if dataset.dimensionality != model.dimensionality:
        raise DataError(f"dimension mismatch: model expects {model.dimensionality}, data has {dataset.dimensionality}")
    unknown = sorted(set(dataset.labels) - {cm.class_label for cm in model.classes})
    if unknown:
        raise DataError(f"labels not present in the model: {unknown}")
    return standardize_apply(dataset.samples, model.standardization)


def augment(model: DmrModel, dataset: Dataset,
            config: Optional[TrainConfig] = None) -> Tuple[DmrModel, list[str]]:
    """Balances an already trained model using its training data, then re-merges and re-ranks.

    Args:
        model (DmrModel): A trained model; it is not modified.
        dataset (Dataset): The labelled rows the model was trained on.
        config (Optional[TrainConfig]): Supplies `seed` and `balance_cap`.

    Returns:
        Tuple[DmrModel, list[str]]: The balanced model and the run's report messages.
    """
    config = config or TrainConfig(balance=True)
    seed = resolve_seed(config.seed)
    report: list[str] = []
    standardized = _standardized_for(model, dataset)
    if model.provenance.balance:
        log_warning("Model was already balanced; balancing again.", report)

    balanced = _balance(model, standardized, dataset.labels, seed, config.balance_cap, report)
    balanced.provenance = replace(balanced.provenance, seed=seed, balance=True, balance_cap=config.balance_cap)
    return _finalize(balanced, standardized, dataset.labels, report), report


def rerank(model: DmrModel, dataset: Dataset) -> DmrModel:
    """Recomputes the prototype ranking of `model` in place from a labelled dataset."""
    model.ranking = rank_prototypes(model, _standardized_for(model, dataset), dataset.labels)
    return model


def update(model: DmrModel, dataset: Dataset,
           config: Optional[TrainConfig] = None) -> Tuple[DmrModel, list[str]]:
    """Continues learning from new labelled rows without retraining.

    The new rows are standardized with the model's frozen parameters and
    streamed into their classes, so existing prototypes keep their ids and
    only move as running means; novel rows add prototypes. A label the model
    has not seen yet gets a new class learned from its rows. Mega-clouds and
    the ranking are then recomputed, the ranking from the new rows.

    Args:
        model (DmrModel): A trained model; it is not modified.
        dataset (Dataset): New labelled raw feature vectors.
        config (Optional[TrainConfig]): `threshold` replaces the model's; with
            `balance` set, prototype counts are balanced again afterwards.

    Returns:
        Tuple[DmrModel, list[str]]: The updated model and the run's report messages.

    Raises:
        DataError: If the rows are unlabelled or of the wrong dimensionality.
    """
    config = config or TrainConfig(threshold=model.threshold)
    _require_labels(dataset)
    if dataset.dimensionality != model.dimensionality:
        raise DataError(f"dimension mismatch: model expects {model.dimensionality}, data has {dataset.dimensionality}")
    report: list[str] = []

    updated = copy.deepcopy(model)
    standardized = standardize_apply(dataset.samples, updated.standardization)
    next_id = updated.next_cloud_id()
    known = {cm.class_label for cm in updated.classes}
    for label, rows in _class_rows(dataset.labels).items():
        if label not in known:
            class_model = learn_class(standardized[rows], label, first_cloud_id=next_id,
                                      source_ids=[dataset.source_ids[i] for i in rows])
            next_id += len(class_model.clouds)
            updated.classes.append(class_model)
            log_info(f"New class '{label}': {len(rows)} sample(s) -> {len(class_model.clouds)} prototype(s).", report)
            continue

        class_model = updated.class_model(label)
        before = len(class_model.clouds)
        for i in rows:
            if absorb(class_model, standardized[i], next_id, dataset.source_ids[i]) == next_id:
                next_id += 1
        refresh_scales(class_model)
        log_info(f"Class '{label}': {len(rows)} new sample(s), {before} -> {len(class_model.clouds)} prototype(s).",
                 report)

    updated.classes.sort(key=lambda cm: cm.class_label)
    updated.threshold = config.threshold
    if config.balance:
        seed = resolve_seed(config.seed)
        updated = _balance(updated, standardized, dataset.labels, seed, config.balance_cap, report)
        updated.provenance = replace(updated.provenance, seed=seed, balance=True, balance_cap=config.balance_cap)
    return _finalize(updated, standardized, dataset.labels, report), report
