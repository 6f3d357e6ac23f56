"""
iCVI Model - cached partition statistics for the online validity-index framework
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from src.models.stats_model import ClusterStats, GrandStats
from src.schemas.config_schemas import IcviName

MIN_OPTIMAL = frozenset({IcviName.WB, IcviName.XB, IcviName.DB})


def _empty_matrix(cols: int = 0) -> np.ndarray:
    return np.zeros((0, cols))


@dataclass
class IcviState:
    """
    Per-cluster (n, mu, cp) tables are stored row-wise so index formulas stay vectorized.

    The prototype tables (labels, counts, connection mass) back the connectivity index and
    are kept in step with module A for every index choice.
    """

    which: IcviName
    n: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    mu: np.ndarray = field(default_factory=_empty_matrix)
    cp: np.ndarray = field(default_factory=lambda: np.zeros(0))
    grand: Optional[GrandStats] = None
    d2: np.ndarray = field(default_factory=_empty_matrix)
    value: Optional[float] = None
    v: int = 0

    proto_labels: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    proto_counts: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    conn_mass: np.ndarray = field(default_factory=_empty_matrix)
    conn_rowsum: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def k(self) -> int:
        return int(self.n.shape[0])

    @property
    def n_prototypes(self) -> int:
        return int(self.proto_labels.shape[0])

    @property
    def min_optimal(self) -> bool:
        return self.which in MIN_OPTIMAL

    def cluster_stats(self, i: int) -> ClusterStats:
        return ClusterStats(n=int(self.n[i]), mu=self.mu[i].copy(), cp=float(self.cp[i]))

    def clone(self) -> "IcviState":
        return IcviState(
            which=self.which,
            n=self.n.copy(),
            mu=self.mu.copy(),
            cp=self.cp.copy(),
            grand=self.grand.copy() if self.grand is not None else None,
            d2=self.d2.copy(),
            value=self.value,
            v=self.v,
            proto_labels=self.proto_labels.copy(),
            proto_counts=self.proto_counts.copy(),
            conn_mass=self.conn_mass.copy(),
            conn_rowsum=self.conn_rowsum.copy(),
        )
