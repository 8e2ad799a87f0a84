import os
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional

from .model_validator import ConfigValidationError, ConfigValidator

DEFAULT_THRESHOLD = 0.9
DEFAULT_BALANCE_CAP = 1000
SEED_ENV_VAR = "DMR_SEED"


def resolve_seed(seed: Optional[int] = None) -> int:
    """Returns the seed every random stream derives from.

    An explicit seed wins; otherwise the `DMR_SEED` environment variable is
    used; otherwise 0. No other entropy source is consulted.
    """
    if seed is not None:
        return int(seed)
    env_value = os.environ.get(SEED_ENV_VAR)
    if env_value:
        try:
            return int(env_value)
        except ValueError:
            raise ConfigValidationError(f"{SEED_ENV_VAR} must be an integer. Got: {env_value!r}")
    return 0


@dataclass
class TrainConfig:
    """Settings for `core.train`.

    Attributes:
        balance (bool): Run synthetic augmentation so every class ends with the
            same number of prototypes.
        balance_cap (int): Per class, at most `balance_cap` x initial deficit
            synthetic samples are generated before the cap fires.
        threshold (float): Cascade confidence threshold stored in the model.
        seed (Optional[int]): Seed of all random streams; see `resolve_seed`.
    """
    balance: bool = False
    balance_cap: int = DEFAULT_BALANCE_CAP
    threshold: float = DEFAULT_THRESHOLD
    seed: Optional[int] = None

    def __post_init__(self):
        ConfigValidator.validate_config(asdict(self))

    @classmethod
    def from_dict(cls, values: Dict[str, Any]) -> "TrainConfig":
        return cls(**values)


@dataclass
class EvalConfig:
    """Settings for `evaluation.evaluate`.

    Attributes:
        repeats (int): Number of stratified random train/test repetitions.
        split (float): Fraction of each class placed in the training partition.
        seed (Optional[int]): Seed of all random streams; see `resolve_seed`.
        balance (bool): Balance prototype counts inside every repetition.
        balance_cap (int): See `TrainConfig.balance_cap`.
        threshold (float): Cascade confidence threshold.
        flat (bool): Predict with the flat nearest-prototype rule instead of the cascade.
    """
    repeats: int = 10
    split: float = 0.8
    seed: Optional[int] = None
    balance: bool = False
    balance_cap: int = DEFAULT_BALANCE_CAP
    threshold: float = DEFAULT_THRESHOLD
    flat: bool = False

    def __post_init__(self):
        ConfigValidator.validate_config(asdict(self))

    @classmethod
    def from_dict(cls, values: Dict[str, Any]) -> "EvalConfig":
        return cls(**values)

    def train_config(self, seed: int) -> TrainConfig:
        """The per-repetition training settings."""
        return TrainConfig(balance=self.balance, balance_cap=self.balance_cap,
                           threshold=self.threshold, seed=seed)
