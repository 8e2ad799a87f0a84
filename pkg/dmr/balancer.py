"""Synthetic samples around minority-class prototypes until every class has equally many prototypes."""
import copy
import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .density import VARIANCE_FLOOR, density
from .errors import DataError
from .learner import absorb, refresh_scales, seed_cloud
from .model import DataCloud, DmrModel
from .reporting import log_error, log_info, log_warning
from .vectors import as_matrix, squared_distances

logger = logging.getLogger(__name__)

ZONE_FACTOR = 0.3

SeedLike = Union[int, np.random.SeedSequence]


@dataclass
class SeedPair:
    """Two points picked near a prototype, the raw material of one synthetic sample."""
    p: np.ndarray
    q: np.ndarray
    cloud_id: int


@dataclass
class SyntheticSample:
    """A generated minority-class sample.

    Attributes:
        features (np.ndarray): The interpolated point.
        class_label (str): Class the sample was generated for.
        cloud_id (int): Prototype it was generated around.
        endpoints (Tuple[np.ndarray, np.ndarray]): The disturbed pair it was
            interpolated between.
    """
    features: np.ndarray
    class_label: str
    cloud_id: int
    endpoints: Tuple[np.ndarray, np.ndarray]


def compute_deficits(model: DmrModel) -> Dict[str, int]:
    """Prototypes each class is missing relative to the class with the most."""
    counts = {cm.class_label: len(cm.clouds) for cm in model.classes}
    if not counts:
        return {}
    target = max(counts.values())
    return {label: target - count for label, count in counts.items()}


def select_seed_pair(cloud: DataCloud, members: Sequence[np.ndarray], rng: np.random.Generator) -> SeedPair:
    """Picks a random distinct pair of members within 0.3 sigma of the prototype.

    With fewer than two members in the zone the pair is (center, nearest
    member); with no members at all it is (center, center).
    """
    center = cloud.center
    if len(members) == 0:
        return SeedPair(p=center.copy(), q=center.copy(), cloud_id=cloud.id)

    matrix = as_matrix(members)
    distances = np.sqrt(squared_distances(center, matrix))
    in_zone = np.flatnonzero(distances <= ZONE_FACTOR * np.sqrt(cloud.variance))
    if in_zone.size >= 2:
        i, j = rng.choice(in_zone, size=2, replace=False)
        return SeedPair(p=matrix[i].copy(), q=matrix[j].copy(), cloud_id=cloud.id)
    return SeedPair(p=center.copy(), q=matrix[int(np.argmin(distances))].copy(), cloud_id=cloud.id)


def perturb_pair(pair: SeedPair, sigma: float, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """Adds independent zero-mean Gaussian noise of standard deviation `sigma` to both points."""
    p_hat = pair.p + rng.normal(0.0, sigma, size=pair.p.shape)
    q_hat = pair.q + rng.normal(0.0, sigma, size=pair.q.shape)
    return p_hat, q_hat


def interpolate(p_hat: np.ndarray, q_hat: np.ndarray, rng: np.random.Generator,
                alpha: Optional[np.ndarray] = None) -> np.ndarray:
    """Random per-coordinate convex combination alpha * p_hat + (1 - alpha) * q_hat.

    Args:
        alpha: Optional fixed weights; drawn uniformly on [0, 1] per coordinate when omitted.
    """
    p_hat = np.asarray(p_hat, dtype=float)
    q_hat = np.asarray(q_hat, dtype=float)
    if p_hat.shape != q_hat.shape:
        raise DataError(f"dimension mismatch: {p_hat.size} vs {q_hat.size}")
    if alpha is None:
        alpha = rng.uniform(0.0, 1.0, size=p_hat.shape)
    rho = alpha * p_hat + (1.0 - alpha) * q_hat
    # rounding must not leave the envelope of the endpoints
    return np.clip(rho, np.minimum(p_hat, q_hat), np.maximum(p_hat, q_hat))


def synthesize(cloud: DataCloud, members: Sequence[np.ndarray], rng: np.random.Generator) -> SyntheticSample:
    """One synthetic sample around `cloud`: seed pair, Gaussian disturbance, interpolation.

    Every coordinate of both endpoints is disturbed with the cloud's local
    standard deviation, the square root of its variance.
    """
    pair = select_seed_pair(cloud, members, rng)
    sigma = float(np.sqrt(cloud.variance))
    p_hat, q_hat = perturb_pair(pair, sigma, rng)
    return SyntheticSample(
        features=interpolate(p_hat, q_hat, rng),
        class_label=cloud.class_label,
        cloud_id=cloud.id,
        endpoints=(p_hat, q_hat),
    )


def _promote_densest(class_model, candidates: List[SyntheticSample], needed: int, next_id: int) -> int:
    stats = class_model.stats
    scale = max(stats.variance, VARIANCE_FLOOR)
    ranked = sorted(candidates, key=lambda s: density(s.features, stats.mean, scale), reverse=True)
    promoted = 0
    for sample in ranked:
        if promoted == needed:
            break
        if squared_distances(sample.features, class_model.centers()).min() == 0.0:
            continue
        class_model.clouds.append(
            seed_cloud(next_id, class_model.class_label, sample.features, stats.variance, synthetic=True)
        )
        next_id += 1
        promoted += 1
    return next_id


def balance_classes(model: DmrModel, training_members: Mapping[int, Sequence[np.ndarray]],
                    seed: SeedLike = 0, balance_cap: int = 1000,
                    report: Optional[List[str]] = None) -> Tuple[DmrModel, List[SyntheticSample]]:
    """Grows every class to the largest per-class prototype count with synthetic samples.

    Classes are processed in label order, each with its own random stream
    spawned from `seed`. For a class short of prototypes, synthetic samples
    are generated around its clouds in turn and fed through the learner; each
    either creates a new cloud or reinforces an existing one. After
    `balance_cap` x initial deficit samples without reaching the target the
    densest samples that did not create a cloud are promoted to clouds
    directly, and the shortfall is logged and stored in
    `model.provenance.cap_exhausted`.

    Args:
        model (DmrModel): A trained model; it is not modified.
        training_members: Standardized training samples per cloud id.
        seed: Integer seed or SeedSequence the per-class streams derive from.
        balance_cap (int): Cap multiplier, see above.
        report (Optional[List[str]]): Receives log messages.

    Returns:
        Tuple[DmrModel, List[SyntheticSample]]: The augmented copy of the model
        and every synthetic sample generated, in generation order.
    """
    report = report if report is not None else []
    balanced = copy.deepcopy(model)
    deficits = compute_deficits(balanced)
    synthetic: List[SyntheticSample] = []
    if not any(deficits.values()):
        return balanced, synthetic

    target = max(len(cm.clouds) for cm in balanced.classes)
    sequence = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    streams = sequence.spawn(len(balanced.classes))

    for class_model, stream in zip(balanced.classes, streams):
        label = class_model.class_label
        deficit = deficits[label]
        if deficit == 0:
            continue

        rng = np.random.default_rng(stream)
        members: Dict[int, List[np.ndarray]] = {
            cloud.id: list(training_members.get(cloud.id, ())) for cloud in class_model.clouds
        }
        next_id = balanced.next_cloud_id()
        cap = balance_cap * deficit
        unabsorbed: List[SyntheticSample] = []
        generated = 0

        while len(class_model.clouds) < target and generated < cap:
            cloud = class_model.clouds[generated % len(class_model.clouds)]
            sample = synthesize(cloud, members.get(cloud.id, ()), rng)
            generated += 1
            synthetic.append(sample)
            receiver = absorb(class_model, sample.features, next_id, synthetic=True)
            if receiver == next_id:
                members[next_id] = [sample.features]
                next_id += 1
            else:
                members.setdefault(receiver, []).append(sample.features)
                unabsorbed.append(sample)

        residual = target - len(class_model.clouds)
        if residual > 0:
            balanced.provenance.cap_exhausted[label] = residual
            log_warning(
                f"Balancing cap reached for class '{label}' after {generated} synthetic sample(s); "
                f"residual deficit {residual}, promoting the densest synthetic samples.",
                report,
            )
            next_id = _promote_densest(class_model, unabsorbed, residual, next_id)
            still_missing = target - len(class_model.clouds)
            if still_missing > 0:
                log_error(f"Class '{label}' remains {still_missing} prototype(s) short of {target}.", report)

        refresh_scales(class_model)
        log_info(
            f"Balanced class '{label}': {target - deficit} -> {len(class_model.clouds)} prototype(s) "
            f"from {generated} synthetic sample(s).",
            report,
        )

    return balanced, synthetic
