"""
Pydantic Schemas for experiment files (TOML) and sweep grids
"""

import enum
import itertools
import math
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.schemas.bench_schemas import OrderMode, SyntheticSpec

SYNTHETIC_SOURCE = "synthetic"


class ModelName(str, enum.Enum):
    ICVI_TOPOARTMAP = "icvi_topoartmap"
    SKM = "skm"
    WS_DVFA = "ws_dvfa"
    WS_TOPOFA = "ws_topofa"
    ETOPOFA = "etopofa"
    NN = "nn"


class Protocol(str, enum.Enum):
    UNSUPERVISED = "unsupervised"
    SEMI_SUPERVISED = "semi_supervised"


class Preset(str, enum.Enum):
    SYNTHETIC_UNSUPERVISED = "synthetic_unsupervised"
    SYNTHETIC_SEMISUPERVISED = "synthetic_semisupervised"
    EMBEDDING_UNSUPERVISED = "embedding_unsupervised"
    EMBEDDING_SEMISUPERVISED = "embedding_semisupervised"


PRESETS: Dict[Preset, Dict[str, Any]] = {
    Preset.SYNTHETIC_UNSUPERVISED: {
        "phi": 5,
        "rho_mt_icvi": 0.9,
        "tau": 0,
        "xi": 600,
        "rho_a": 0.0,
        "rho_c": 0.0,
    },
    Preset.SYNTHETIC_SEMISUPERVISED: {
        "rho_mt_icvi": 0.9,
        "xi": 100,
        "rho_a": 0.0,
        "rho_c": 0.0,
        "l_type": "fixed",
        "en_swap": False,
        "en_merge": False,
        "en_split": False,
        "en_prune_reassign": False,
        "en_tu": True,
        "en_compress": True,
        "en_mt_icvi": True,
    },
    Preset.EMBEDDING_UNSUPERVISED: {
        "match_type": "cosine",
        "rho_a": 0.2,
        "beta_2": 0.0,
        "en_tu": True,
        "en_swap": True,
        "en_prune_reassign": False,
        "en_merge": False,
        "en_split": False,
        "en_compress": False,
        "en_mt_icvi": False,
    },
    Preset.EMBEDDING_SEMISUPERVISED: {
        "match_type": "cosine",
        "rho_a": 2.0,
        "rho_mt_icvi": 0.1,
        "xi": 300,
        "l_type": "fixed",
        "en_swap": False,
        "en_merge": False,
        "en_split": False,
        "en_prune_reassign": False,
        "en_tu": True,
        "en_compress": True,
        "en_mt_icvi": True,
    },
}

GridSpec = Union[str, List[Any], int, float, bool]


def _number(text: str) -> Union[int, float]:
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        return float(text)


def parse_grid(spec: GridSpec) -> List[Any]:
    """
    Expand one sweep entry.

    "start:stop:step" is inclusive of stop (0:0.9:0.1 gives ten points); a list is taken
    as is and a scalar is a singleton grid.
    """
    if isinstance(spec, list):
        if not spec:
            raise ValueError("Sweep lists must not be empty")
        return list(spec)
    if not isinstance(spec, str) or ":" not in spec:
        return [spec]

    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError(f"Grid '{spec}' must look like start:stop:step")
    try:
        start, stop, step = (_number(p) for p in parts)
    except ValueError:
        raise ValueError(f"Grid '{spec}' holds a non-numeric bound")
    if step <= 0:
        raise ValueError(f"Grid '{spec}' needs a positive step")
    if stop < start:
        raise ValueError(f"Grid '{spec}' has stop below start")

    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    if all(isinstance(v, int) for v in (start, stop, step)):
        return [start + i * step for i in range(count)]
    return [round(start + i * step, 12) for i in range(count)]


class DatasetConfig(BaseModel):
    source: str = SYNTHETIC_SOURCE
    has_labels: bool = True
    synthetic: SyntheticSpec = Field(default_factory=SyntheticSpec)

    model_config = ConfigDict(extra="forbid")

    @property
    def is_synthetic(self) -> bool:
        return self.source == SYNTHETIC_SOURCE


class ExperimentConfig(BaseModel):
    name: str = Field(default="experiment", min_length=1)
    model: ModelName = ModelName.ICVI_TOPOARTMAP
    order: OrderMode = OrderMode.RANDOM
    seed: int = 0
    preset: Optional[Preset] = None
    protocol: Protocol = Protocol.UNSUPERVISED
    trace_ari_every: int = Field(default=0, ge=0, description="0 disables ARI-so-far")
    dataset: DatasetConfig = Field(default_factory=DatasetConfig)
    params: Dict[str, Any] = Field(default_factory=dict)
    sweep: Dict[str, GridSpec] = Field(default_factory=dict)

    model_config = ConfigDict(extra="forbid")

    @field_validator("model", "order", "protocol", "preset", mode="before")
    def normalize_enum_text(cls, v):
        if isinstance(v, str):
            return v.strip().lower().replace("-", "_")
        return v

    @field_validator("sweep")
    def validate_sweep(cls, v):
        for key, spec in v.items():
            try:
                parse_grid(spec)
            except ValueError as e:
                raise ValueError(f"sweep.{key}: {e}")
        return v

    def grid_points(self) -> List[Dict[str, Any]]:
        """Cartesian product of the sweep grids, in file order"""
        if not self.sweep:
            return [{}]
        keys = list(self.sweep)
        axes = [parse_grid(self.sweep[key]) for key in keys]
        return [dict(zip(keys, values)) for values in itertools.product(*axes)]
