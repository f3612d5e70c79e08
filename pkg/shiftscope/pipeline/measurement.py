"""Shift features for one (base, target) pair.

Every score is computed on the restrictions ``B'`` and ``T'`` of the two
datasets to their shared label space. Base-side work that does not depend
on the target (the fitted temperature, rotation classifiers) is cached on a
``MeasureContext`` so a protocol run computes it once per base.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Any

from shiftscope.confidence import (
    Temperature,
    apply_temperature,
    expected_calibration_error,
    fit_temperature,
    summarize,
)
from shiftscope.config import Settings
from shiftscope.data import Dataset, DatasetView, LabelSpace, accuracy, intersect_labels, restrict
from shiftscope.distances import (
    RotationClassifier,
    discriminative_distance,
    fit_rotation_classifier,
    frechet,
    mmd,
    score_rotation,
)
from shiftscope.exceptions import DataError
from shiftscope.pipeline.methods import REQUIRES, Method, Modality

logger = logging.getLogger(__name__)

GAP_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ShiftMeasurement:
    """Named shift features of one target against one base.

    Attributes:
        base_name: Base dataset name.
        target_name: Target dataset name.
        group: Target's group tag.
        features: Scalar ``S`` per feature key (``ac``, ``doc``, ``frechet``...).
        base_acc_on_intersection: Base accuracy over the shared label space.
        true_target_acc: Target accuracy over the shared label space when
            the target is labeled.
        true_gap: ``base_acc_on_intersection - true_target_acc``.
        extras: Diagnostics reported alongside the features.
        label_space: The shared label space.
    """

    base_name: str
    target_name: str
    group: str
    features: Mapping[str, float]
    base_acc_on_intersection: float
    true_target_acc: float | None = None
    true_gap: float | None = None
    extras: Mapping[str, float] = field(default_factory=dict)
    label_space: LabelSpace | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "features", MappingProxyType(dict(self.features)))
        object.__setattr__(self, "extras", MappingProxyType(dict(self.extras)))
        if self.true_target_acc is not None and self.true_gap is None:
            object.__setattr__(
                self, "true_gap", self.base_acc_on_intersection - self.true_target_acc
            )
        if self.true_target_acc is not None and self.true_gap is not None:
            expected = self.base_acc_on_intersection - self.true_target_acc
            if abs(self.true_gap - expected) > GAP_TOLERANCE:
                raise DataError(
                    "true_gap must equal base accuracy minus target accuracy",
                    details={"true_gap": self.true_gap, "expected": expected},
                    ref="accuracy gap",
                )

    @property
    def is_labeled(self) -> bool:
        return self.true_target_acc is not None

    def feature(self, key: str) -> float:
        try:
            return self.features[key]
        except KeyError:
            raise DataError(
                f"measurement of {self.target_name} lacks feature {key}",
                details={"available": sorted(self.features)},
            ) from None

    def without_truth(self) -> ShiftMeasurement:
        return replace(self, true_target_acc=None, true_gap=None)

    def to_dict(self) -> dict[str, Any]:
        return {
            "base": self.base_name,
            "target": self.target_name,
            "group": self.group,
            "features": dict(self.features),
            "extras": dict(self.extras),
            "base_acc_on_intersection": self.base_acc_on_intersection,
            "true_target_acc": self.true_target_acc,
            "true_gap": self.true_gap,
        }


class MeasureContext:
    """Per-base cache for the fitted temperature and rotation classifiers."""

    def __init__(self, settings: Settings | None = None, temperature: Temperature | None = None) -> None:
        self.settings = settings or Settings()
        self._temperature = temperature
        self._temperature_base: str | None = None
        self._classifiers: dict[tuple[str, tuple[int, ...]], RotationClassifier] = {}

    def temperature(self, base: Dataset) -> Temperature:
        """Temperature fitted once on the whole labeled base dataset."""
        if self._temperature is None or (
            self._temperature_base is not None and self._temperature_base != base.name
        ):
            self._temperature = fit_temperature(base.view(), self.settings.temperature)
            self._temperature_base = base.name
            logger.info("fitted temperature %.4f on %s", self._temperature.t, base.name)
        return self._temperature

    def rotation_classifier(self, base_view: DatasetView) -> RotationClassifier:
        key = (base_view.name, base_view.col_classes.ids)
        if key not in self._classifiers:
            rotated = base_view.rotated_features
            assert rotated is not None
            self._classifiers[key] = fit_rotation_classifier(rotated, self.settings.rotation)
        return self._classifiers[key]


def check_modalities(base: Dataset, target: Dataset, methods: Iterable[Method]) -> None:
    """Raise ``DataError`` naming the first method whose inputs are missing."""
    for method in methods:
        modality = REQUIRES.get(method)
        if modality is Modality.FEATURES and (base.features is None or target.features is None):
            raise DataError(f"{method.value} requires features", details={"method": method.value})
        if modality is Modality.ROTATED_FEATURES and (
            base.rotated_features is None or target.rotated_features is None
        ):
            raise DataError(
                f"{method.value} requires rotated features", details={"method": method.value}
            )


def measure(
    base: Dataset,
    target: Dataset,
    methods: Iterable[Method],
    settings: Settings | None = None,
    *,
    group: str = "",
    context: MeasureContext | None = None,
) -> ShiftMeasurement:
    """Compute the requested shift features of ``target`` against ``base``."""
    methods = tuple(Method(item) for item in methods)
    context = context or MeasureContext(settings)
    settings = settings or context.settings
    check_modalities(base, target, methods)

    shared = intersect_labels(base, target)
    base_view = restrict(base, shared)
    target_view = restrict(target, shared)
    base_summary = summarize(base_view)
    target_summary = summarize(target_view)

    features: dict[str, float] = {
        "ac": target_summary.avg_confidence,
        "doc": base_summary.avg_confidence - target_summary.avg_confidence,
        "doe": base_summary.avg_entropy - target_summary.avg_entropy,
    }
    extras: dict[str, float] = {"ac_base": base_summary.avg_confidence}

    if Method.AC_TEMPSCALING in methods:
        scaled = apply_temperature(target, context.temperature(base), settings.temperature.floor)
        features["ac_tempscaling"] = summarize(restrict(scaled, shared)).avg_confidence
        extras["temperature"] = context.temperature(base).t

    if Method.FRECHET in methods:
        features["frechet"] = frechet(base_view.features, target_view.features)
    if Method.MMD in methods:
        features["mmd"] = mmd(base_view.features, target_view.features)
    if Method.DISC_A_PROXY in methods or Method.DISC_AUC in methods:
        report = discriminative_distance(
            base_view.features,
            target_view.features,
            settings.split_spec,
            settings.discriminator,
        )
        features["disc_a_proxy"] = report.a_proxy
        features["disc_auc"] = report.auc
        extras["disc_accuracy"] = report.accuracy
    if Method.ROTATION in methods:
        classifier = context.rotation_classifier(base_view)
        rotation = score_rotation(classifier, target_view.rotated_features)
        features["rotation"] = rotation.accuracy
        extras["rotation_auc"] = rotation.auc

    extras["ece_base"] = expected_calibration_error(base_view, settings.ece_bins)
    true_target_acc = None
    if target.is_labeled:
        true_target_acc = accuracy(target_view)
        extras["ece_target"] = expected_calibration_error(target_view, settings.ece_bins)

    measurement = ShiftMeasurement(
        base_name=base.name,
        target_name=target.name,
        group=group,
        features=features,
        base_acc_on_intersection=accuracy(base_view),
        true_target_acc=true_target_acc,
        extras=extras,
        label_space=shared,
    )
    logger.debug("measured %s vs %s: %s", target.name, base.name, features)
    return measurement
