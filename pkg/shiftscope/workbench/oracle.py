"""Calibrated oracles built from labeled predictions.

Each row's maximum probability is replaced by the empirical accuracy of its
confidence bin, so average confidence matches accuracy up to bin
resolution. The remaining mass is spread over the other columns in
proportion to their original values and capped strictly below the new
maximum, which keeps every row's predicted class unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from shiftscope.data import Dataset, DatasetView
from shiftscope.exceptions import DataError
from shiftscope.types import Matrix

MIN_ROWS = 1_000
_FLOOR_MARGIN = 1e-6
_CAP_MARGIN = 1e-9


@dataclass(frozen=True, slots=True)
class CalibratedOracle:
    """Merged confidence bins and the confidence assigned to each.

    ``bin_edges`` has one more entry than ``confidence``; empty equal-width
    bins are merged into their left neighbour.
    """

    bin_edges: tuple[float, ...]
    confidence: tuple[float, ...]
    counts: tuple[int, ...]
    n: int

    def __post_init__(self) -> None:
        if len(self.bin_edges) != len(self.confidence) + 1:
            raise DataError("oracle needs one more bin edge than bins")
        if sum(self.counts) != self.n:
            raise DataError("oracle bin counts must add up to n")


def make_calibrated_oracle(
    view: DatasetView, bins: int = 15, *, name: str | None = None
) -> tuple[CalibratedOracle, Dataset]:
    """Rewrite a labeled view into an approximately perfectly calibrated dataset.

    The output covers the view's columns; restricted rows are renormalized
    before rewriting.
    """
    if view.labels is None:
        raise DataError(f"labels required to build an oracle from {view.name}")
    if view.n < MIN_ROWS:
        raise DataError(f"oracle needs at least {MIN_ROWS} rows", details={"n": view.n})
    k = len(view.col_classes)
    if k < 2:
        raise DataError("oracle needs at least two classes")
    if bins < 1:
        raise DataError("oracle needs at least one bin")

    probabilities = view.probabilities
    totals = probabilities.sum(axis=1, keepdims=True)
    probabilities = np.where(totals > 0, probabilities / np.where(totals > 0, totals, 1.0), 1.0 / k)
    predicted = np.argmax(probabilities, axis=1)
    rows = np.arange(view.n)
    top = probabilities[rows, predicted]
    correct = view.col_classes.as_array()[predicted] == view.labels

    raw_bin = np.minimum((top * bins).astype(np.int64), bins - 1)
    counts = np.bincount(raw_bin, minlength=bins)
    merged = np.maximum.accumulate(np.where(counts > 0, np.arange(bins), -1))
    # leading empty bins join the first non-empty bin
    merged = np.where(merged < 0, int(np.argmax(counts > 0)), merged)
    occupied = np.unique(merged)
    group = np.searchsorted(occupied, merged[raw_bin])

    group_counts = np.bincount(group, minlength=occupied.size)
    group_accuracy = np.bincount(group, weights=correct.astype(np.float64), minlength=occupied.size)
    group_accuracy = group_accuracy / group_counts
    confidence = np.maximum(group_accuracy, 1.0 / k + _FLOOR_MARGIN)

    new_top = confidence[group]
    rewritten = _spread_remaining(probabilities, predicted, new_top)

    edges = [0.0] + [float(index) / bins for index in occupied[1:]] + [1.0]
    oracle = CalibratedOracle(
        bin_edges=tuple(edges),
        confidence=tuple(float(value) for value in confidence),
        counts=tuple(int(value) for value in group_counts),
        n=view.n,
    )
    dataset = Dataset(
        name=name or f"{view.name}-oracle",
        probabilities=rewritten,
        prob_classes=view.col_classes,
        labels=view.labels,
        features=view.features,
        rotated_features=view.rotated_features,
    )
    return oracle, dataset


def _spread_remaining(probabilities: Matrix, predicted: np.ndarray, top: np.ndarray) -> Matrix:
    n, k = probabilities.shape
    rows = np.arange(n)
    others = probabilities.copy()
    others[rows, predicted] = 0.0
    remaining = 1.0 - top
    cap = top - _CAP_MARGIN
    free = np.ones_like(others, dtype=bool)
    free[rows, predicted] = False
    result = np.zeros_like(others)
    budget = remaining.copy()

    # water-filling: capped entries leave the pool, the rest share what is left
    for _ in range(k):
        weights = np.where(free, others, 0.0)
        mass = weights.sum(axis=1)
        slots = free.sum(axis=1)
        share = np.where(
            (mass > 0)[:, None],
            weights / np.where(mass > 0, mass, 1.0)[:, None],
            free / np.maximum(slots, 1)[:, None],
        )
        proposal = share * budget[:, None]
        over = free & (proposal > cap[:, None])
        if not over.any():
            result = np.where(free, proposal, result)
            break
        result = np.where(over, cap[:, None], result)
        budget = budget - (over * cap[:, None]).sum(axis=1)
        free &= ~over
    result[rows, predicted] = top
    return result
