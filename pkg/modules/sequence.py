#!/usr/bin/env python3
"""
Sample Sequence
Ordered 2D point sequence shared by the generators, samplers and renderers
"""

from dataclasses import dataclass, field
from typing import Any, Dict

import numpy as np
import pandas as pd


@dataclass(frozen=True)
class SampleSequence:
    """Ordered points; row order is the progressive-refinement order"""

    strategy: str
    seed: int
    points: np.ndarray
    metadata: Dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).reshape(-1, 2)
        pts.setflags(write=False)
        object.__setattr__(self, 'points', pts)

    def __len__(self) -> int:
        return len(self.points)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SampleSequence):
            return NotImplemented
        return (self.strategy == other.strategy and self.seed == other.seed
                and np.array_equal(self.points, other.points))

    __hash__ = None

    def prefix(self, k: int) -> 'SampleSequence':
        return SampleSequence(self.strategy, self.seed, self.points[:k], dict(self.metadata))

    def in_unit_square(self) -> bool:
        p = self.points
        return bool(np.all(p >= 0.0) and np.all(p < 1.0))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({'x': self.points[:, 0], 'y': self.points[:, 1]})
