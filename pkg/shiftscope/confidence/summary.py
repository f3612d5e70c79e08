"""Average confidence, average entropy, DoC, DoE, and DoC-Feat.

Both summaries run over a view's retained columns without renormalizing,
and entropy uses the natural logarithm with ``0 * ln 0 = 0``. DoC and DoE
are base-side minus target-side values over the intersected label space,
so both are antisymmetric and vanish on identical inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from shiftscope.data import Dataset, DatasetView, LabelSpace, intersect_labels, restrict
from shiftscope.exceptions import DataError


@dataclass(frozen=True, slots=True)
class ConfidenceSummary:
    avg_confidence: float
    avg_entropy: float
    n: int
    label_space: LabelSpace

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DataError("confidence summary needs at least one row")
        # restricted rows can sum below 1, which loosens ln K by at most 1/e
        if self.avg_entropy > math.log(len(self.label_space)) + 1.0 / math.e + 1e-9:
            raise DataError("average entropy exceeds ln K")


def summarize(view: DatasetView) -> ConfidenceSummary:
    if view.n == 0:
        raise DataError(f"cannot summarize an empty view of {view.name}")
    probabilities = view.probabilities
    return ConfidenceSummary(
        avg_confidence=float(np.mean(probabilities.max(axis=1))),
        avg_entropy=float(np.mean(-xlogy(probabilities, probabilities).sum(axis=1))),
        n=view.n,
        label_space=view.col_classes,
    )


def summarize_pair(base: Dataset, target: Dataset) -> tuple[ConfidenceSummary, ConfidenceSummary]:
    """Summaries of both datasets restricted to their shared label space."""
    shared = intersect_labels(base, target)
    return summarize(restrict(base, shared)), summarize(restrict(target, shared))


def doc(base: Dataset, target: Dataset) -> float:
    """Difference of average confidences, base minus target."""
    base_summary, target_summary = summarize_pair(base, target)
    return base_summary.avg_confidence - target_summary.avg_confidence


def doe(base: Dataset, target: Dataset) -> float:
    """Difference of average entropies, base minus target."""
    base_summary, target_summary = summarize_pair(base, target)
    return base_summary.avg_entropy - target_summary.avg_entropy


def doc_feat_predict(base_acc: float, doc_value: float) -> float:
    """Regressor-free accuracy estimate ``base_acc - DoC`` clamped to [0, 1]."""
    if not 0.0 <= base_acc <= 1.0:
        raise DataError("base accuracy must lie in [0, 1]", details={"base_acc": base_acc})
    return min(1.0, max(0.0, base_acc - doc_value))
