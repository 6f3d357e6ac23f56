"""
Map Field Model - category-to-cluster association matrix
"""

from dataclasses import dataclass, field

import numpy as np


@dataclass
class MapField:
    """W^ab with one row per module A category and one column per live cluster"""

    w_ab: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))

    @property
    def n_categories(self) -> int:
        return int(self.w_ab.shape[0])

    @property
    def n_clusters(self) -> int:
        return int(self.w_ab.shape[1])

    def cluster_of(self, j: int) -> int:
        return int(np.argmax(self.w_ab[j]))

    def labels(self) -> np.ndarray:
        if self.n_categories == 0:
            return np.zeros(0, dtype=np.int64)
        return np.argmax(self.w_ab, axis=1).astype(np.int64)
