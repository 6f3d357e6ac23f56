"""
Range Model - running per-feature bounds used for online min-max normalization
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RangeState:
    x_min: np.ndarray
    x_max: np.ndarray

    @property
    def d(self) -> int:
        return int(self.x_min.shape[0])

    @property
    def span(self) -> np.ndarray:
        return self.x_max - self.x_min

    @property
    def degenerate(self) -> np.ndarray:
        """Mask of features whose bounds have not opened yet"""
        return self.span <= 0.0

    @classmethod
    def from_sample(cls, x: np.ndarray) -> "RangeState":
        x = np.asarray(x, dtype=float)
        return cls(x_min=x.copy(), x_max=x.copy())

    @classmethod
    def from_bounds(cls, x_min, x_max) -> "RangeState":
        return cls(
            x_min=np.asarray(x_min, dtype=float).copy(),
            x_max=np.asarray(x_max, dtype=float).copy(),
        )

    def contains(self, other: "RangeState") -> bool:
        return bool(
            np.all(self.x_min <= other.x_min) and np.all(self.x_max >= other.x_max)
        )
