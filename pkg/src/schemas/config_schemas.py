"""
Pydantic Schemas for Model Configuration
Keys are named after the usual ART symbols (rho_a, beta_1, ...)
"""

import enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class MatchType(str, enum.Enum):
    FUZZY = "fuzzy"
    COSINE = "cosine"


class LearningType(str, enum.Enum):
    VARIABLE = "variable"
    FIXED = "fixed"


class IcviName(str, enum.Enum):
    CH = "ch"
    WB = "wb"
    PBM = "pbm"
    XB = "xb"
    DB = "db"
    CONN = "conn"


class SplitType(str, enum.Enum):
    ACTIVITY = "activity"
    FULL = "full"
    PARTIAL = "partial"


class ArtmapConfig(BaseModel):
    """iCVI-TopoARTMAP hyper-parameters"""

    rho_a: float = Field(default=0.0, ge=0.0, le=2.0)
    beta_1: float = Field(default=1.0, gt=0.0, le=1.0)
    beta_2: float = Field(default=0.0, ge=0.0, le=1.0)
    alpha: float = Field(default=0.001, gt=0.0)
    match_type: MatchType = MatchType.FUZZY
    en_tu: bool = True

    epsilon: float = Field(default=0.01, description="Map field match tracking step")
    rho_ab: float = Field(default=1.0, ge=0.0, le=1.0)
    beta_ab: float = Field(default=1.0, gt=0.0, le=1.0)
    l_type: LearningType = LearningType.VARIABLE

    icvi: IcviName = IcviName.CH
    en_mt_icvi: bool = True
    epsilon_icvi: Optional[float] = Field(
        default=None, description="Defaults to rho_mt_icvi - rho_a"
    )
    rho_mt_icvi: float = Field(default=0.9, ge=0.0, le=2.0)

    en_swap: bool = True
    en_merge: bool = True
    en_split: bool = True
    s_type: SplitType = SplitType.ACTIVITY
    en_compress: bool = True
    rho_c: float = Field(default=0.0, ge=0.0, le=1.0)
    en_prune_reassign: bool = True

    tau: int = Field(default=0, ge=0, description="iCVI checks threshold")
    phi: int = Field(default=5, ge=0, description="Cluster sample-count threshold")
    xi: int = Field(default=100, ge=0, description="Category inactivity threshold")

    compress_max_epochs: int = Field(default=100, ge=1)
    oracle_checks: bool = False

    model_config = ConfigDict(use_enum_values=False, extra="forbid")

    @field_validator("match_type", "l_type", "icvi", "s_type", mode="before")
    def normalize_enum_text(cls, v):
        if isinstance(v, str):
            return v.strip().lower()
        return v

    @model_validator(mode="after")
    def validate_ranges(self):
        if self.beta_2 > self.beta_1:
            raise ValueError(
                f"beta_2 ({self.beta_2}) must not exceed beta_1 ({self.beta_1})"
            )
        upper = 2.0 if self.match_type == MatchType.COSINE else 1.0
        for name in ("rho_a", "rho_mt_icvi"):
            value = getattr(self, name)
            if value > upper:
                raise ValueError(
                    f"{name}={value} outside [0, {upper}] for {self.match_type.value} match"
                )
        return self

    @property
    def icvi_step(self) -> float:
        if self.epsilon_icvi is not None:
            return self.epsilon_icvi
        if self.match_type == MatchType.COSINE:
            return self.rho_a - self.rho_mt_icvi
        return self.rho_mt_icvi - self.rho_a
