from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from shiftscope.types import Matrix, Vector


@dataclass(frozen=True, eq=False)
class Standardizer:
    """Per-column affine map to mean 0 and variance 1.

    Constant columns keep scale 1 so they map to 0 instead of dividing by 0.
    """

    mean: Vector
    scale: Vector

    @classmethod
    def fit(cls, rows: Matrix) -> Standardizer:
        rows = np.asarray(rows, dtype=np.float64)
        mean = rows.mean(axis=0)
        scale = rows.std(axis=0)
        scale = np.where(scale > 0, scale, 1.0)
        return cls(mean=mean, scale=scale)

    @classmethod
    def identity(cls, width: int) -> Standardizer:
        return cls(mean=np.zeros(width), scale=np.ones(width))

    def transform(self, rows: Matrix) -> Matrix:
        return (np.asarray(rows, dtype=np.float64) - self.mean) / self.scale
