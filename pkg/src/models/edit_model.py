"""
Edit Model - structural changes applied by the post-processing strategies
"""

from dataclasses import dataclass
from typing import Optional, Union


@dataclass(frozen=True)
class MoveEdit:
    """Re-map one category to another cluster; target == k opens a new cluster"""

    category: int
    target: int


@dataclass(frozen=True)
class MergeEdit:
    """Fold cluster `absorb` into cluster `keep`; ids above `absorb` shift down"""

    keep: int
    absorb: int


Edit = Union[MoveEdit, MergeEdit]


@dataclass(frozen=True)
class Presentation:
    """What module A and the map field did with one sample"""

    j1: int
    j2: Optional[int]
    created_category: bool
    cluster: int
