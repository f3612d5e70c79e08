"""Base-vs-target discriminators: accuracy, AUC, and A-proxy.

Base rows are labeled 0 and target rows 1. Each side is split 40/10/50;
the discriminator trains on the train portions, picks its L2 strength by
tune-portion NLL, and reports on the test portions. A-proxy is
``2 * (1 - 2 * error)`` with the test error.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from shiftscope.config import DiscriminatorConfig
from shiftscope.data.labels import LabelSpace
from shiftscope.distances.auc import roc_auc
from shiftscope.exceptions import DataError
from shiftscope.io.splits import SplitSpec, make_splits
from shiftscope.learners import (
    Standardizer,
    fit_logistic,
    fit_mlp_regressor,
    predict_proba,
)
from shiftscope.types import Matrix, Vector

logger = logging.getLogger(__name__)

_DOMAINS = LabelSpace((0, 1))


@dataclass(frozen=True, slots=True)
class DiscriminatorReport:
    accuracy: float
    auc: float
    a_proxy: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.accuracy <= 1.0 or not 0.0 <= self.auc <= 1.0:
            raise DataError("discriminator accuracy and AUC must lie in [0, 1]")
        if abs(self.a_proxy - a_proxy(1.0 - self.accuracy)) > 1e-9:
            raise DataError("a_proxy is inconsistent with accuracy")

    @classmethod
    def from_scores(cls, scores: Vector, labels: Vector) -> DiscriminatorReport:
        """Report for target-domain scores thresholded at one half."""
        accuracy = float(np.mean((scores > 0.5) == labels.astype(bool)))
        return cls(
            accuracy=accuracy,
            auc=roc_auc(scores, labels),
            a_proxy=a_proxy(1.0 - accuracy),
        )


def a_proxy(error: float) -> float:
    return 2.0 * (1.0 - 2.0 * error)


def discriminative_distance(
    base_features: Matrix,
    target_features: Matrix,
    spec: SplitSpec | None = None,
    config: DiscriminatorConfig | None = None,
) -> DiscriminatorReport:
    spec = spec or SplitSpec()
    config = config or DiscriminatorConfig()
    base = np.atleast_2d(np.asarray(base_features, dtype=np.float64))
    target = np.atleast_2d(np.asarray(target_features, dtype=np.float64))
    if base.shape[1] != target.shape[1]:
        raise DataError(
            "feature dimension mismatch",
            details={"base": base.shape[1], "target": target.shape[1]},
        )
    if not (np.all(np.isfinite(base)) and np.all(np.isfinite(target))):
        raise DataError("discriminator features must be finite")

    base_parts = make_splits(base.shape[0], spec)
    target_parts = make_splits(target.shape[0], spec.with_seed(spec.seed + 1))
    (x_train, y_train), (x_tune, y_tune), (x_test, y_test) = (
        _stack(base[b], target[t]) for b, t in zip(base_parts, target_parts)
    )

    scaler = Standardizer.fit(x_train) if config.standardize else Standardizer.identity(x_train.shape[1])
    x_train, x_tune, x_test = (scaler.transform(x) for x in (x_train, x_tune, x_test))

    if config.kind == "mlp":
        model = fit_mlp_regressor(x_train, y_train, config.mlp)
        scores = model.predict_many(x_test)
    else:
        scores = _linear_scores(x_train, y_train, x_tune, y_tune, x_test, config)
    report = DiscriminatorReport.from_scores(scores, y_test)
    logger.debug("discriminator accuracy %.4f auc %.4f", report.accuracy, report.auc)
    return report


def _linear_scores(
    x_train: Matrix,
    y_train: Vector,
    x_tune: Matrix,
    y_tune: Vector,
    x_test: Matrix,
    config: DiscriminatorConfig,
) -> Vector:
    best_model = None
    best_nll = np.inf
    rows = np.arange(y_tune.shape[0])
    for l2 in config.l2_grid:
        model = fit_logistic(
            x_train,
            y_train,
            l2,
            classes=_DOMAINS,
            max_iter=config.max_iter,
            tol=config.tol,
        )
        tune_probs = predict_proba(model, x_tune)
        nll = -float(np.mean(np.log(np.maximum(tune_probs[rows, y_tune], 1e-300))))
        if nll < best_nll:
            best_model, best_nll = model, nll
    assert best_model is not None
    return predict_proba(best_model, x_test)[:, 1]


def _stack(base: Matrix, target: Matrix) -> tuple[Matrix, Vector]:
    x = np.vstack([base, target])
    y = np.concatenate([np.zeros(base.shape[0], dtype=np.int64), np.ones(target.shape[0], dtype=np.int64)])
    return x, y
