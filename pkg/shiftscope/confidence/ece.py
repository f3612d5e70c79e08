from __future__ import annotations

import numpy as np

from shiftscope.data import DatasetView, predict_labels
from shiftscope.exceptions import DataError


def expected_calibration_error(view: DatasetView, bins: int = 15) -> float:
    """Weighted mean gap between confidence and accuracy over equal-width bins.

    A diagnostic only; nothing in the prediction path depends on it.
    """
    labels = view.labels
    if labels is None:
        raise DataError(f"labels required for calibration error of {view.name}")
    if bins < 1:
        raise DataError("ece needs at least one bin")
    probabilities = view.probabilities
    confidence = probabilities.max(axis=1)
    correct = predict_labels(probabilities, view.col_classes) == labels
    # Bin i covers (i/bins, (i+1)/bins]; zero confidence falls into bin 0.
    assignment = np.clip(np.ceil(confidence * bins).astype(int) - 1, 0, bins - 1)
    total = 0.0
    for index in np.unique(assignment):
        members = assignment == index
        total += members.sum() * abs(correct[members].mean() - confidence[members].mean())
    return float(total / view.n)
