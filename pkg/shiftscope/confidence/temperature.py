"""Temperature scaling on stored probabilities.

The data model keeps probabilities, not logits, so ``ln p`` stands in for
the logits: ``softmax(ln p / t)`` equals logit scaling up to a per-row
constant that softmax absorbs. Probabilities are floored at 1e-12 before
taking logarithms.

The temperature is chosen by a geometric grid over ``[lower, upper]``
followed by golden-section refinement around the best grid point. The
search never returns a temperature whose NLL exceeds the NLL at ``t = 1``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import log_softmax, softmax

from shiftscope.config import TemperatureConfig
from shiftscope.data import Dataset, DatasetView
from shiftscope.exceptions import ConfigError, DataError
from shiftscope.types import Matrix, Vector

logger = logging.getLogger(__name__)

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, slots=True)
class Temperature:
    t: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.t) and self.t > 0):
            raise ConfigError("temperature must be positive and finite", details={"t": self.t})


def scaled_log_probabilities(
    probabilities: Matrix, t: float, floor: float = 1e-12
) -> Matrix:
    return log_softmax(np.log(np.maximum(probabilities, floor)) / t, axis=1)


def temperature_nll(
    probabilities: Matrix, label_columns: Vector, t: float, floor: float = 1e-12
) -> float:
    """Mean negative log-likelihood of the labels after scaling by ``t``."""
    log_probs = scaled_log_probabilities(probabilities, t, floor)
    return -float(np.mean(log_probs[np.arange(len(label_columns)), label_columns]))


def fit_temperature(
    view: DatasetView, config: TemperatureConfig | None = None
) -> Temperature:
    config = config or TemperatureConfig()
    labels = view.labels
    if labels is None:
        raise DataError(f"labels required to fit a temperature on {view.name}")
    if len(view.col_classes) < 2:
        raise DataError("temperature scaling needs at least two classes")
    columns = np.searchsorted(view.col_classes.as_array(), labels)
    probabilities = view.probabilities

    def nll(t: float) -> float:
        return temperature_nll(probabilities, columns, t, config.floor)

    grid = np.geomspace(config.lower, config.upper, config.grid_points)
    scores = [nll(float(t)) for t in grid]
    best = int(np.argmin(scores))
    low = float(grid[max(best - 1, 0)])
    high = float(grid[min(best + 1, len(grid) - 1)])

    left = high - _GOLDEN * (high - low)
    right = low + _GOLDEN * (high - low)
    left_score, right_score = nll(left), nll(right)
    while high - low >= config.tol:
        if left_score <= right_score:
            high, right, right_score = right, left, left_score
            left = high - _GOLDEN * (high - low)
            left_score = nll(left)
        else:
            low, left, left_score = left, right, right_score
            right = low + _GOLDEN * (high - low)
            right_score = nll(right)
    fitted = (low + high) / 2.0

    if nll(fitted) > nll(1.0):
        fitted = 1.0
    logger.debug("fitted temperature %.4f on %s", fitted, view.name)
    return Temperature(fitted)


def apply_temperature(dataset: Dataset, temperature: Temperature, floor: float = 1e-12) -> Dataset:
    """Replace every probability row by ``softmax(ln p / t)``."""
    scaled = softmax(
        np.log(np.maximum(dataset.probabilities, floor)) / temperature.t, axis=1
    )
    return dataset.with_probabilities(scaled)
