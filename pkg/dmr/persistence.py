"""Versioned JSON model files.

Floats are written with Python's shortest round-trip representation, so a
load followed by a save reproduces the file byte for byte.
"""
import json
import os
import tempfile
from typing import Any, Dict

import numpy as np

from .errors import ModelError
from .model import (FORMAT_VERSION, ClassModel, DataCloud, DmrModel, MegaCloud, Provenance,
                    RankedPrototypes)
from .model_validator import ModelValidationError, ModelValidator
from .vectors import RunningStats, StandardizationParams


def _floats(array: np.ndarray) -> list:
    return [float(v) for v in np.asarray(array, dtype=float).reshape(-1)]


def model_to_dict(model: DmrModel) -> Dict[str, Any]:
    """The JSON layout of a model, fields in DmrModel order."""
    return {
        "format_version": model.format_version,
        "dimensionality": model.dimensionality,
        "standardization": {
            "per_feature_mean": _floats(model.standardization.per_feature_mean),
            "per_feature_std": _floats(model.standardization.per_feature_std),
        },
        "classes": [
            {
                "class_label": cm.class_label,
                "stats": {
                    "count": cm.stats.count,
                    "mean": _floats(cm.stats.mean),
                    "mean_sq_norm": float(cm.stats.mean_sq_norm),
                    "variance": float(cm.stats.variance),
                },
                "clouds": [
                    {
                        "id": cloud.id,
                        "class_label": cloud.class_label,
                        "center": _floats(cloud.center),
                        "support": cloud.support,
                        "mean_sq_norm": float(cloud.mean_sq_norm),
                        "variance": float(cloud.variance),
                        "source_sample_id": cloud.source_sample_id,
                        "synthetic": cloud.synthetic,
                    }
                    for cloud in cm.clouds
                ],
            }
            for cm in model.classes
        ],
        "megaclouds": None if model.megaclouds is None else [
            {"id": m.id, "class_label": m.class_label, "member_cloud_ids": list(m.member_cloud_ids)}
            for m in model.megaclouds
        ],
        "ranking": None if model.ranking is None else {
            "order": list(model.ranking.order),
            "per_cloud_error": {str(cid): float(model.ranking.per_cloud_error[cid])
                                for cid in sorted(model.ranking.per_cloud_error)},
        },
        "threshold": float(model.threshold),
        "provenance": {
            "seed": model.provenance.seed,
            "balance": model.provenance.balance,
            "balance_cap": model.provenance.balance_cap,
            "cap_exhausted": {k: model.provenance.cap_exhausted[k]
                              for k in sorted(model.provenance.cap_exhausted)},
        },
    }


def model_from_dict(payload: Dict[str, Any]) -> DmrModel:
    """Rebuilds a model from its JSON layout after version and integrity checks.

    Raises:
        ModelError: For an unsupported `format_version`.
        ModelValidationError: For missing fields or broken references.
    """
    version = payload.get("format_version")
    if version != FORMAT_VERSION:
        raise ModelError(f"unsupported version {version}; this build reads version {FORMAT_VERSION}")
    try:
        ModelValidator.validate_model(payload)
        classes = [
            ClassModel(
                class_label=cm["class_label"],
                stats=RunningStats(
                    count=cm["stats"]["count"],
                    mean=np.array(cm["stats"]["mean"], dtype=float),
                    mean_sq_norm=cm["stats"]["mean_sq_norm"],
                    variance=cm["stats"]["variance"],
                ),
                clouds=[
                    DataCloud(
                        id=c["id"],
                        class_label=c["class_label"],
                        center=np.array(c["center"], dtype=float),
                        support=c["support"],
                        mean_sq_norm=c["mean_sq_norm"],
                        variance=c["variance"],
                        source_sample_id=c["source_sample_id"],
                        synthetic=c["synthetic"],
                    )
                    for c in cm["clouds"]
                ],
            )
            for cm in payload["classes"]
        ]
        megaclouds = payload["megaclouds"]
        ranking = payload["ranking"]
        provenance = payload["provenance"]
        return DmrModel(
            format_version=version,
            dimensionality=payload["dimensionality"],
            standardization=StandardizationParams(
                per_feature_mean=np.array(payload["standardization"]["per_feature_mean"], dtype=float),
                per_feature_std=np.array(payload["standardization"]["per_feature_std"], dtype=float),
            ),
            classes=classes,
            megaclouds=None if megaclouds is None else [
                MegaCloud(id=m["id"], class_label=m["class_label"], member_cloud_ids=tuple(m["member_cloud_ids"]))
                for m in megaclouds
            ],
            ranking=None if ranking is None else RankedPrototypes(
                order=list(ranking["order"]),
                per_cloud_error={int(k): v for k, v in ranking["per_cloud_error"].items()},
            ),
            threshold=payload["threshold"],
            provenance=Provenance(
                seed=provenance["seed"],
                balance=provenance["balance"],
                balance_cap=provenance["balance_cap"],
                cap_exhausted=dict(provenance["cap_exhausted"]),
            ),
        )
    except KeyError as e:
        raise ModelValidationError(str(e.args[0]), "missing field")


def dumps(model: DmrModel) -> str:
    return json.dumps(model_to_dict(model), indent=2, allow_nan=False) + "\n"


def loads(text: str) -> DmrModel:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelError(f"model file is not valid JSON: {e}")
    if not isinstance(payload, dict):
        raise ModelError("model file must hold a JSON object")
    return model_from_dict(payload)


def save_model(model: DmrModel, path) -> None:
    """Writes the model atomically: a temporary file in the target directory, then a rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(prefix=".dmr-", suffix=".json", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(dumps(model))
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def load_model(path) -> DmrModel:
    """Reads a model file written by `save_model`.

    Raises:
        ModelError: If the file is missing, not JSON, or of an unsupported version.
        ModelValidationError: If the file breaks referential integrity.
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise ModelError(f"cannot read model '{path}': {e}")
    return loads(text)
