"""
Dataset Repository - CSV ingest for externally produced samples (e.g. embeddings)
"""

import csv
import logging
from pathlib import Path
from typing import List, NamedTuple, Optional

import numpy as np

from src.utils.exceptions import DatasetError

logger = logging.getLogger(__name__)


class Dataset(NamedTuple):
    samples: np.ndarray
    labels: Optional[np.ndarray]


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


class DatasetRepository:
    """Repository for numeric CSV files: d feature columns plus an optional label column"""

    def ingest(self, path: Path, has_labels: bool = True) -> Dataset:
        path = Path(path)
        if not path.is_file():
            raise DatasetError(f"Dataset file not found: {path}")

        rows: List[List[float]] = []
        width = None
        with open(path, encoding="utf-8", newline="") as handle:
            for line_no, row in enumerate(csv.reader(handle), start=1):
                cells = [c.strip() for c in row]
                if not any(cells):
                    continue
                if not rows and width is None and not all(_is_number(c) for c in cells):
                    # header
                    width = len(cells)
                    continue
                if width is None:
                    width = len(cells)
                if len(cells) != width:
                    raise DatasetError(
                        f"{path}:{line_no}: expected {width} columns, found {len(cells)}"
                    )
                try:
                    rows.append([float(c) for c in cells])
                except ValueError:
                    raise DatasetError(f"{path}:{line_no}: non-numeric cell in {cells}")

        if not rows:
            raise DatasetError(f"Dataset file has no samples: {path}")

        data = np.asarray(rows, dtype=float)
        if not has_labels:
            return Dataset(samples=data, labels=None)

        if data.shape[1] < 2:
            raise DatasetError(f"{path}: a labeled file needs at least one feature column")
        labels = data[:, -1]
        if not np.all(labels == np.round(labels)):
            raise DatasetError(f"{path}: the label column must hold integers")
        logger.info(f"Ingested {data.shape[0]} samples with {data.shape[1] - 1} features")
        return Dataset(samples=data[:, :-1], labels=labels.astype(np.int64))


def get_dataset_repository() -> DatasetRepository:
    """Get DatasetRepository instance"""
    return DatasetRepository()
