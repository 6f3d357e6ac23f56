"""
Module A Model - hyperbox categories, their local statistics and the CONN topology
"""

from dataclasses import dataclass, field
from typing import List

import numpy as np

from src.models.stats_model import ClusterStats


@dataclass
class Category:
    """One prototype: complement-coded weight [u, 1 - v], local stats and inactivity"""

    w: np.ndarray
    stats: ClusterStats
    inactivity: int = 0

    @property
    def d(self) -> int:
        return int(self.w.shape[0] // 2)

    def lower(self) -> np.ndarray:
        return self.w[: self.d]

    def upper(self) -> np.ndarray:
        return 1.0 - self.w[self.d :]


def empty_conn() -> np.ndarray:
    return np.zeros((0, 0), dtype=np.int64)


@dataclass
class ModuleA:
    categories: List[Category] = field(default_factory=list)
    conn: np.ndarray = field(default_factory=empty_conn)

    @property
    def size(self) -> int:
        return len(self.categories)

    @property
    def weights(self) -> np.ndarray:
        if not self.categories:
            return np.zeros((0, 0))
        return np.vstack([c.w for c in self.categories])

    @property
    def inactivity(self) -> np.ndarray:
        return np.array([c.inactivity for c in self.categories], dtype=np.int64)

    @property
    def frequencies(self) -> np.ndarray:
        return np.array([c.stats.n for c in self.categories], dtype=np.int64)
