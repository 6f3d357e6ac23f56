"""
Pydantic Schemas for per-step reports and persisted experiment results
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

SCHEMA_VERSION = 1


class StepReport(BaseModel):
    """What one online presentation did to the model"""

    schema_version: int = SCHEMA_VERSION
    t: int = Field(..., ge=1)
    assigned_cluster: int = Field(..., ge=0)
    k: int = Field(..., ge=1)
    P: int = Field(..., ge=1, description="Module A category count")
    rho_a: float
    v: int = Field(..., ge=0)
    icvi_value: Optional[float] = None
    ari_so_far: Optional[float] = None

    model_config = ConfigDict(extra="ignore")


class RunMetrics(BaseModel):
    ari: Optional[float] = None
    acc: Optional[float] = None
    n_mis: Optional[int] = None
    k_hat: int
    P: Optional[int] = None


class RunResults(BaseModel):
    schema_version: int = SCHEMA_VERSION
    name: str
    model: str
    order: str
    protocol: str
    seed: int
    n_samples: int
    metrics: RunMetrics
    runtime_s: float
    params: Dict[str, Any] = Field(default_factory=dict)

    model_config = ConfigDict(extra="ignore")


class SweepRow(BaseModel):
    params: Dict[str, Any]
    metrics: RunMetrics
    runtime_s: float


class ComparisonRow(BaseModel):
    """One line of a comparison table; `source` tells ours from externally reported runs"""

    model: str
    order: str
    ari: Optional[float] = None
    k_hat: Optional[int] = None
    P: Optional[int] = None
    source: str = "ours"


class ComparisonTable(BaseModel):
    rows: List[ComparisonRow] = Field(default_factory=list)
