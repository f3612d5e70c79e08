"""Rotation prediction as a shift score.

A 4-class softmax classifier learns, on base featurizations, which of the
0/90/180/270-degree rotations produced each row. Its accuracy and
macro one-vs-rest AUC on the target's rotated featurizations form the
score; classifiers degrade when the target's orientation statistics differ.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from shiftscope.config import RotationConfig
from shiftscope.data.labels import LabelSpace
from shiftscope.distances.auc import macro_ovr_auc
from shiftscope.exceptions import DataError
from shiftscope.learners import LinearModel, Standardizer, fit_logistic, predict_proba
from shiftscope.types import Matrix, Vector

ROTATION_CLASSES = LabelSpace((0, 1, 2, 3))


@dataclass(frozen=True, slots=True)
class RotationReport:
    accuracy: float
    auc: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.accuracy <= 1.0 or not 0.0 <= self.auc <= 1.0:
            raise DataError("rotation accuracy and AUC must lie in [0, 1]")


@dataclass(frozen=True, eq=False)
class RotationClassifier:
    model: LinearModel
    scaler: Standardizer

    @property
    def width(self) -> int:
        return self.model.n_features


def fit_rotation_classifier(
    base_rotated: Sequence[Matrix], config: RotationConfig | None = None
) -> RotationClassifier:
    config = config or RotationConfig()
    x, y = _stack_rotations(base_rotated)
    scaler = Standardizer.fit(x) if config.standardize else Standardizer.identity(x.shape[1])
    model = fit_logistic(
        scaler.transform(x),
        y,
        config.l2,
        classes=ROTATION_CLASSES,
        max_iter=config.max_iter,
        tol=config.tol,
    )
    return RotationClassifier(model=model, scaler=scaler)


def score_rotation(
    classifier: RotationClassifier, target_rotated: Sequence[Matrix]
) -> RotationReport:
    x, y = _stack_rotations(target_rotated)
    if x.shape[1] != classifier.width:
        raise DataError(
            "rotated feature dimension mismatch",
            details={"classifier": classifier.width, "target": x.shape[1]},
        )
    probabilities = predict_proba(classifier.model, classifier.scaler.transform(x))
    predicted = np.argmax(probabilities, axis=1)
    return RotationReport(
        accuracy=float(np.mean(predicted == y)),
        auc=macro_ovr_auc(probabilities, y),
    )


def rotation_score(
    base_rotated: Sequence[Matrix],
    target_rotated: Sequence[Matrix],
    config: RotationConfig | None = None,
) -> RotationReport:
    return score_rotation(fit_rotation_classifier(base_rotated, config), target_rotated)


def _stack_rotations(rotated: Sequence[Matrix]) -> tuple[Matrix, Vector]:
    if len(rotated) != len(ROTATION_CLASSES):
        raise DataError("rotation scoring needs exactly four rotated featurizations")
    blocks = [np.atleast_2d(np.asarray(item, dtype=np.float64)) for item in rotated]
    if any(block.shape[0] == 0 for block in blocks):
        raise DataError("every rotation class needs at least one row")
    if len({block.shape[1] for block in blocks}) != 1:
        raise DataError("rotated feature dimension mismatch")
    if not all(np.all(np.isfinite(block)) for block in blocks):
        raise DataError("rotated features must be finite")
    x = np.vstack(blocks)
    y = np.concatenate(
        [np.full(block.shape[0], index, dtype=np.int64) for index, block in enumerate(blocks)]
    )
    return x, y
