"""
Pydantic Schemas for synthetic data generation and stream ordering
"""

import enum
from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class OrderMode(str, enum.Enum):
    CLASS_INCREMENTAL = "class_incremental"
    MIXED = "mixed"
    RANDOM = "random"


# two clusters on top, five along the bottom
DEFAULT_MEANS: List[Tuple[float, float]] = [
    (2.5, 6.0),
    (7.5, 6.0),
    (0.0, 2.0),
    (2.5, 2.0),
    (5.0, 2.0),
    (7.5, 2.0),
    (10.0, 2.0),
]


class SyntheticSpec(BaseModel):
    """
    Isotropic Gaussian mixture recorded with every run.

    Samples are spread as evenly as possible; the first `n_samples % len(means)` clusters
    get one extra. `top` lists the clusters presented cluster-by-cluster in mixed order.
    """

    means: List[List[float]] = Field(default_factory=lambda: [list(m) for m in DEFAULT_MEANS])
    sigma: float = Field(default=0.5, gt=0.0)
    n_samples: int = Field(default=1600, ge=1)
    top: List[int] = Field(default_factory=lambda: [0, 1])

    model_config = ConfigDict(extra="forbid")

    @field_validator("means")
    def validate_means(cls, v):
        if not v:
            raise ValueError("At least one cluster mean is required")
        widths = {len(m) for m in v}
        if len(widths) != 1 or 0 in widths:
            raise ValueError(f"Cluster means must share one non-zero dimension, got {widths}")
        return v

    @model_validator(mode="after")
    def validate_layout(self):
        if self.n_samples < len(self.means):
            raise ValueError(
                f"n_samples={self.n_samples} cannot cover {len(self.means)} clusters"
            )
        for c in self.top:
            if not 0 <= c < len(self.means):
                raise ValueError(f"Top cluster {c} is not one of the {len(self.means)} clusters")
        return self

    @property
    def n_clusters(self) -> int:
        return len(self.means)

    def counts(self) -> List[int]:
        base, extra = divmod(self.n_samples, self.n_clusters)
        return [base + (1 if c < extra else 0) for c in range(self.n_clusters)]
