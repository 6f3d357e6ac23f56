"""
iCVI-TopoARTMAP Network Model - everything one online learner owns
"""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from src.models.category_model import ModuleA
from src.models.icvi_model import IcviState
from src.models.mapfield_model import MapField
from src.models.range_model import RangeState
from src.schemas.config_schemas import ArtmapConfig


@dataclass
class OracleHistory:
    """Raw samples and the category that encoded each one (oracle mode only)"""

    samples: List[np.ndarray] = field(default_factory=list)
    categories: List[int] = field(default_factory=list)


@dataclass
class TopoArtmapNetwork:
    config: ArtmapConfig
    module_a: ModuleA
    map_field: MapField
    icvi: IcviState
    rho_a: float
    range: Optional[RangeState] = None
    t: int = 0
    history: Optional[OracleHistory] = None

    @classmethod
    def create(cls, config: ArtmapConfig) -> "TopoArtmapNetwork":
        return cls(
            config=config,
            module_a=ModuleA(),
            map_field=MapField(),
            icvi=IcviState(which=config.icvi),
            rho_a=config.rho_a,
            history=OracleHistory() if config.oracle_checks else None,
        )

    @property
    def n_categories(self) -> int:
        return self.module_a.size

    @property
    def n_clusters(self) -> int:
        return self.map_field.n_clusters
