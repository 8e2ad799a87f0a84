"""CSV ingestion of precomputed feature vectors."""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from .errors import DataError

logger = logging.getLogger(__name__)


@dataclass
class Dataset:
    """Feature vectors with parallel labels and source row ids.

    Attributes:
        samples (np.ndarray): (N, n) matrix of raw features.
        labels (Optional[List[str]]): Class label per row; None for unlabelled queries.
        source_ids (List[int]): Row index of each sample in its source file.
    """
    samples: np.ndarray
    labels: Optional[List[str]]
    source_ids: List[int]

    def __post_init__(self):
        if self.labels is not None and len(self.labels) != len(self.samples):
            raise DataError("labels and samples differ in length")
        if len(self.source_ids) != len(self.samples):
            raise DataError("source ids and samples differ in length")

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def dimensionality(self) -> int:
        return int(self.samples.shape[1])

    @property
    def classes(self) -> List[str]:
        """Distinct labels, sorted."""
        return sorted(set(self.labels or []))

    def subset(self, indices: Sequence[int]) -> "Dataset":
        indices = list(indices)
        return Dataset(
            samples=self.samples[indices],
            labels=None if self.labels is None else [self.labels[i] for i in indices],
            source_ids=[self.source_ids[i] for i in indices],
        )


def load_csv(path, dimensionality: Optional[int] = None) -> Dataset:
    """Reads a headerless CSV of `n` numeric fields followed by one label per row.

    Rows are numbered from 0 and the numbers are kept as `source_ids`.

    Args:
        path: File to read.
        dimensionality (Optional[int]): Expected feature count. When given, rows
            with exactly `dimensionality` fields are read as unlabelled queries.

    Raises:
        DataError: For a missing or empty file, ragged rows, a wrong field
            count, an empty label, or a non-numeric or non-finite feature
            (reported by row and column).
    """
    try:
        frame = pd.read_csv(path, header=None, dtype=str, keep_default_na=False, skipinitialspace=True)
    except FileNotFoundError:
        raise DataError(f"cannot read '{path}': file not found")
    except pd.errors.EmptyDataError:
        raise DataError(f"empty file: '{path}'")
    except pd.errors.ParserError as e:
        raise DataError(f"ragged rows in '{path}': {e}")

    if frame.empty:
        raise DataError(f"empty file: '{path}'")
    short_rows = np.flatnonzero(frame.isna().any(axis=1).to_numpy())
    if short_rows.size:
        raise DataError(f"ragged rows in '{path}': row {short_rows[0]} has fewer than {frame.shape[1]} fields")

    n_fields = frame.shape[1]
    if dimensionality is None or n_fields == dimensionality + 1:
        labelled = True
        n_features = n_fields - 1
    elif n_fields == dimensionality:
        labelled = False
        n_features = n_fields
    else:
        raise DataError(f"dimension mismatch: model expects {dimensionality} features, '{path}' has {n_fields} fields")
    if n_features < 1:
        raise DataError(f"'{path}' has no feature columns")

    raw = frame.iloc[:, :n_features]
    features = raw.apply(pd.to_numeric, errors="coerce")
    invalid = features.isna().to_numpy()
    rows = np.flatnonzero(invalid.any(axis=1))
    if rows.size:
        row = int(rows[0])
        column = int(np.flatnonzero(invalid[row])[0])
        raise DataError(f"non-numeric feature at row {row} column {column}: {raw.iat[row, column]!r}")
    values = features.to_numpy(dtype=float)
    non_finite = np.argwhere(~np.isfinite(values))
    if non_finite.size:
        row, column = (int(v) for v in non_finite[0])
        raise DataError(f"non-finite feature at row {row} column {column}: {raw.iat[row, column]!r}")

    labels = None
    if labelled:
        labels = frame.iloc[:, n_features].str.strip().tolist()
        empty = [i for i, label in enumerate(labels) if not label]
        if empty:
            raise DataError(f"missing label at row {empty[0]}")

    logger.info("loaded %d row(s) with %d feature(s) from '%s'", len(values), n_features, path)
    return Dataset(samples=values, labels=labels, source_ids=list(range(len(values))))
