from __future__ import annotations

import numpy as np

from shiftscope.exceptions import DataError
from shiftscope.types import Matrix


def mmd(base_features: Matrix, target_features: Matrix) -> float:
    """Linear-kernel MMD: Euclidean norm of the difference of feature means."""
    base = np.atleast_2d(np.asarray(base_features, dtype=np.float64))
    target = np.atleast_2d(np.asarray(target_features, dtype=np.float64))
    if base.shape[1] != target.shape[1]:
        raise DataError(
            "feature dimension mismatch",
            details={"base": base.shape[1], "target": target.shape[1]},
        )
    if base.shape[0] < 1 or target.shape[0] < 1:
        raise DataError("mmd needs at least one row per side")
    return float(np.linalg.norm(base.mean(axis=0) - target.mean(axis=0)))
