"""
Summary Statistics Model - frequency, mean and hard compactness of a group of samples
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ClusterStats:
    """(n, mu, cp) triplet; cp is the sum of squared deviations from mu"""

    n: int
    mu: np.ndarray
    cp: float

    @property
    def d(self) -> int:
        return int(self.mu.shape[0])

    def copy(self) -> "ClusterStats":
        return ClusterStats(n=self.n, mu=self.mu.copy(), cp=self.cp)


# Whole-data statistics share the recursion and the representation.
GrandStats = ClusterStats
