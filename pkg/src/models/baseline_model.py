"""
Baseline Models - state of the comparison methods
"""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from src.models.category_model import ModuleA
from src.models.range_model import RangeState
from src.schemas.baseline_schemas import (
    DistanceMetric,
    DvfaConfig,
    ETopoFaConfig,
    SkmConfig,
    TopoFaConfig,
)


@dataclass
class SkmModel:
    """Sequential k-means; rows are added until k centroids are seeded"""

    config: SkmConfig
    centroids: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))
    counts: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    @property
    def seeded(self) -> int:
        return int(self.counts.shape[0])


@dataclass
class DvfaModel:
    config: DvfaConfig
    module_a: ModuleA = field(default_factory=ModuleA)
    cluster_of: List[int] = field(default_factory=list)
    n_clusters: int = 0
    range: Optional[RangeState] = None


@dataclass
class TopoFaModel:
    """Single TopoART module; clusters are connected components of CONN"""

    config: TopoFaConfig
    module_a: ModuleA = field(default_factory=ModuleA)
    range: Optional[RangeState] = None
    t: int = 0


@dataclass
class ETopoFaModel:
    config: ETopoFaConfig
    module_a: ModuleA = field(default_factory=ModuleA)
    range: Optional[RangeState] = None


@dataclass
class NnModel:
    prototypes: np.ndarray
    labels: np.ndarray
    metric: DistanceMetric = DistanceMetric.EUCLIDEAN
