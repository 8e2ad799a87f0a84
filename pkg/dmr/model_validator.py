import math
import warnings
from typing import Any, Dict, Optional

from .errors import DmrError, ModelError


class ConfigValidationError(DmrError, ValueError):
    """Custom Exception for invalid training or evaluation settings."""
    pass


class ModelValidationError(ModelError):
    """Raised when a serialized model breaks referential integrity.

    Attributes:
        path (str): Field path of the offending value, e.g. ``megaclouds[2].member_cloud_ids``.
    """

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _is_real(value) -> bool:
    return (_is_int(value) or isinstance(value, float)) and math.isfinite(value)


class ConfigValidator:
    """
    Static checks for TrainConfig / EvalConfig values.

    Hard inconsistencies raise `ConfigValidationError`; settings that are legal
    but probably not what the caller meant emit a `UserWarning`.
    """

    @classmethod
    def validate_config(cls, config: Dict[str, Any]):
        """
        Validates a configuration given as a plain dictionary of its fields.

        Args:
            config (dict): Field values of a `TrainConfig` or `EvalConfig`.

        Raises:
            ConfigValidationError: If a value is out of range. This includes:
                - `threshold` outside [0, 1].
                - `balance_cap` below 1.
                - `repeats` below 1 or `split` outside the open interval (0, 1).
                - a negative `seed`.
        """
        if not isinstance(config, dict):
            raise ConfigValidationError("Configuration must be a dictionary.")

        threshold = config.get("threshold")
        if threshold is not None and not 0.0 <= threshold <= 1.0:
            raise ConfigValidationError(f"'threshold' must lie in [0, 1]. Got: {threshold}")

        cap = config.get("balance_cap")
        if cap is not None and cap < 1:
            raise ConfigValidationError(f"'balance_cap' must be at least 1. Got: {cap}")

        seed = config.get("seed")
        if seed is not None and seed < 0:
            raise ConfigValidationError(f"'seed' must be nonnegative. Got: {seed}")

        if "repeats" in config and config["repeats"] < 1:
            raise ConfigValidationError(f"'repeats' must be at least 1. Got: {config['repeats']}")

        if "split" in config and not 0.0 < config["split"] < 1.0:
            raise ConfigValidationError(f"'split' must lie strictly between 0 and 1. Got: {config['split']}")

        if not config.get("balance") and cap is not None and cap != 1000:
            warnings.warn(
                f"'balance_cap' is set to {cap} but balancing is disabled; the cap has no effect.",
                UserWarning
            )


class ModelValidator:
    """
    Referential-integrity checks for a model in its serialized (dict) layout.

    Run by `persistence.load_model` before any object is rebuilt, so a tampered
    file fails with the field path of the first broken reference.
    """

    @classmethod
    def validate_model(cls, payload: Dict[str, Any]):
        """
        Validates a deserialized model dictionary.

        Args:
            payload (dict): The decoded JSON document.

        Raises:
            ModelValidationError: On duplicate cloud ids, dangling ids in
                `megaclouds` or `ranking`, a ranking that is not a permutation
                of all clouds, a partition violation, a cloud dimensionality
                that differs from the model's, a threshold outside [0, 1], a
                cloud variance that is not finite and positive, or a field of
                the wrong type.
        """
        dim = payload["dimensionality"]
        threshold = payload["threshold"]
        if not _is_int(dim) or dim < 1:
            raise ModelValidationError("dimensionality", f"must be a positive integer, got {dim!r}")
        if not _is_real(threshold) or not 0.0 <= threshold <= 1.0:
            raise ModelValidationError("threshold", f"must lie in [0, 1], got {threshold}")

        for key in ("per_feature_mean", "per_feature_std"):
            if len(payload["standardization"][key]) != dim:
                raise ModelValidationError(f"standardization.{key}", "dimension mismatch")
        if not all(_is_real(v) and v > 0 for v in payload["standardization"]["per_feature_std"]):
            raise ModelValidationError("standardization.per_feature_std", "must hold finite positive numbers")

        cloud_labels: Dict[int, str] = {}
        for ci, class_model in enumerate(payload["classes"]):
            for cj, cloud in enumerate(class_model["clouds"]):
                path = f"classes[{ci}].clouds[{cj}]"
                if not _is_int(cloud["id"]):
                    raise ModelValidationError(f"{path}.id", f"must be an integer, got {cloud['id']!r}")
                if cloud["id"] in cloud_labels:
                    raise ModelValidationError(f"{path}.id", f"duplicate cloud id {cloud['id']}")
                if cloud["class_label"] != class_model["class_label"]:
                    raise ModelValidationError(f"{path}.class_label", "differs from its class")
                if len(cloud["center"]) != dim:
                    raise ModelValidationError(f"{path}.center", "dimension mismatch")
                if not all(_is_real(v) for v in cloud["center"]):
                    raise ModelValidationError(f"{path}.center", "must hold finite numbers")
                if not _is_int(cloud["support"]) or cloud["support"] < 1:
                    raise ModelValidationError(f"{path}.support", "must be a positive integer")
                if not _is_real(cloud["variance"]) or cloud["variance"] <= 0:
                    raise ModelValidationError(f"{path}.variance", f"must be finite and positive, got {cloud['variance']!r}")
                cloud_labels[cloud["id"]] = cloud["class_label"]

        cls._validate_megaclouds(payload.get("megaclouds"), cloud_labels)
        cls._validate_ranking(payload.get("ranking"), cloud_labels)

    @classmethod
    def _validate_megaclouds(cls, megaclouds: Optional[list], cloud_labels: Dict[int, str]):
        if megaclouds is None:
            return
        seen = set()
        for mi, mega in enumerate(megaclouds):
            path = f"megaclouds[{mi}].member_cloud_ids"
            if not mega["member_cloud_ids"]:
                raise ModelValidationError(path, "empty mega-cloud")
            for cloud_id in mega["member_cloud_ids"]:
                if cloud_id not in cloud_labels:
                    raise ModelValidationError(path, f"unknown cloud id {cloud_id}")
                if cloud_id in seen:
                    raise ModelValidationError(path, f"cloud id {cloud_id} belongs to two mega-clouds")
                if cloud_labels[cloud_id] != mega["class_label"]:
                    raise ModelValidationError(path, f"cloud id {cloud_id} has a different class label")
                seen.add(cloud_id)
        missing = sorted(set(cloud_labels) - seen)
        if missing:
            raise ModelValidationError("megaclouds", f"cloud id {missing[0]} is not in any mega-cloud")

    @classmethod
    def _validate_ranking(cls, ranking: Optional[dict], cloud_labels: Dict[int, str]):
        if ranking is None:
            return
        for cloud_id in ranking["order"]:
            if cloud_id not in cloud_labels:
                raise ModelValidationError("ranking.order", f"unknown cloud id {cloud_id}")
        if sorted(ranking["order"]) != sorted(cloud_labels):
            raise ModelValidationError("ranking.order", "is not a permutation of the model's cloud ids")
        for key, error in ranking["per_cloud_error"].items():
            if int(key) not in cloud_labels:
                raise ModelValidationError("ranking.per_cloud_error", f"unknown cloud id {key}")
            if not 0.0 <= error <= 1.0:
                raise ModelValidationError(f"ranking.per_cloud_error.{key}", f"must lie in [0, 1], got {error}")
