"""
Pydantic Schemas for the comparison baselines
"""

import enum

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.schemas.config_schemas import MatchType


class DistanceMetric(str, enum.Enum):
    EUCLIDEAN = "euclidean"
    COSINE = "cosine"


class SkmConfig(BaseModel):
    """Sequential (MacQueen) k-means"""

    k: int = Field(default=7, ge=1)

    model_config = ConfigDict(extra="forbid")


class DvfaConfig(BaseModel):
    """Dual vigilance fuzzy ART with a weight-sharing map field"""

    rho_ub: float = Field(default=0.85, ge=0.0, le=1.0)
    rho_lb: float = Field(default=0.75, ge=0.0, le=1.0)
    alpha: float = Field(default=0.001, gt=0.0)
    beta: float = Field(default=1.0, gt=0.0, le=1.0)

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def validate_vigilances(self):
        if self.rho_lb > self.rho_ub:
            raise ValueError(
                f"rho_lb ({self.rho_lb}) must not exceed rho_ub ({self.rho_ub})"
            )
        return self


class TopoFaConfig(BaseModel):
    """Topological fuzzy ART whose clusters are the connected components of CONN"""

    rho: float = Field(default=0.75, ge=0.0, le=1.0)
    alpha: float = Field(default=0.001, gt=0.0)
    beta_1: float = Field(default=1.0, gt=0.0, le=1.0)
    beta_2: float = Field(default=0.0, ge=0.0, le=1.0)
    phi: int = Field(default=5, ge=0, description="Prune categories encoding fewer samples")
    tau: int = Field(default=100, ge=1, description="Pruning period in samples")
    en_tu: bool = False
    match_type: MatchType = MatchType.FUZZY

    model_config = ConfigDict(extra="forbid")


class ETopoFaConfig(BaseModel):
    """Enhanced topological fuzzy ART; every category is its own cluster"""

    rho: float = Field(default=0.0, ge=0.0, le=2.0)
    alpha: float = Field(default=0.001, gt=0.0)
    beta_1: float = Field(default=1.0, gt=0.0, le=1.0)
    beta_2: float = Field(default=0.0, ge=0.0, le=1.0)
    en_tu: bool = True
    match_type: MatchType = MatchType.FUZZY

    model_config = ConfigDict(extra="forbid")


class NnConfig(BaseModel):
    """Supervised nearest-neighbour reference"""

    metric: DistanceMetric = DistanceMetric.EUCLIDEAN

    model_config = ConfigDict(extra="forbid")
