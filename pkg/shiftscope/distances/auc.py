"""ROC AUC via the Mann-Whitney U statistic.

Average ranks make tied (positive, negative) pairs count one half.
"""

from __future__ import annotations

import numpy as np
from scipy.stats import rankdata

from shiftscope.exceptions import DataError
from shiftscope.types import Matrix, Vector


def roc_auc(scores: Vector | list[float], labels: Vector | list[int]) -> float:
    scores = np.asarray(scores, dtype=np.float64).reshape(-1)
    positive = np.asarray(labels).reshape(-1).astype(bool)
    if scores.shape != positive.shape:
        raise DataError("scores and labels must have equal length")
    n_pos = int(positive.sum())
    n_neg = positive.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DataError("roc_auc needs both positive and negative labels")
    ranks = rankdata(scores, method="average")
    u_statistic = float(ranks[positive].sum()) - n_pos * (n_pos + 1) / 2.0
    return u_statistic / (n_pos * n_neg)


def macro_ovr_auc(probabilities: Matrix, labels: Vector) -> float:
    """Mean one-vs-rest AUC over the classes (columns) present in ``labels``."""
    labels = np.asarray(labels).reshape(-1)
    classes = [c for c in range(probabilities.shape[1]) if 0 < np.sum(labels == c) < labels.size]
    if not classes:
        raise DataError("macro AUC needs at least two classes present")
    return float(np.mean([roc_auc(probabilities[:, c], labels == c) for c in classes]))
