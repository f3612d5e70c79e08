"""Calibrate on one group of shifts, validate on others.

Targets inside each group are processed in ascending name order. All
predictors are fitted before any validation target is measured, so nothing
about a validation target can reach a fit.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from shiftscope.config import Settings
from shiftscope.exceptions import ConfigError, DataError, LeakageError
from shiftscope.io.manifest import GroupedDataset, load_manifest
from shiftscope.pipeline.evaluation import EvaluationReport, evaluate
from shiftscope.pipeline.measurement import MeasureContext, ShiftMeasurement, measure
from shiftscope.pipeline.methods import COMBINED, FEATURE_KEY, Method, parse_methods
from shiftscope.pipeline.predictor import AccuracyPredictor, fit_predictor

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProtocolResult:
    base_name: str
    cal_group: str
    val_groups: tuple[str, ...]
    predictors: dict[str, AccuracyPredictor]
    reports: dict[str, EvaluationReport]
    calibration: tuple[ShiftMeasurement, ...] = field(default=())
    validation: tuple[ShiftMeasurement, ...] = field(default=())


def calibrate_and_validate(
    datasets: Sequence[GroupedDataset] | str | Path,
    base_name: str,
    cal_group: str,
    val_group: str | Sequence[str],
    methods: Sequence[Method | str] | str = "all",
    settings: Settings | None = None,
) -> ProtocolResult:
    """Run the full protocol and keep every intermediate product."""
    settings = settings or Settings()
    if isinstance(datasets, (str, Path)):
        datasets = load_manifest(datasets)
    val_groups = (val_group,) if isinstance(val_group, str) else tuple(val_group)
    ensure_no_leakage((cal_group,), val_groups)
    selected = parse_methods(methods if isinstance(methods, str) else list(methods))

    base = next((item.dataset for item in datasets if item.name == base_name), None)
    if base is None:
        raise DataError(f"unknown base dataset: {base_name}")
    if not base.is_labeled:
        raise DataError(f"labels required on base dataset {base_name}")

    measured = measured_methods(selected, settings)
    context = MeasureContext(settings)

    def targets_in(groups: Sequence[str]) -> list[GroupedDataset]:
        chosen = [item for item in datasets if item.group in groups and item.name != base_name]
        return sorted(chosen, key=lambda item: item.name)

    calibration = tuple(
        measure(base, item.dataset, measured, settings, group=item.group, context=context)
        for item in targets_in((cal_group,))
    )
    logger.info("measured %d calibration shifts in %s", len(calibration), cal_group)

    temperature = context.temperature(base) if Method.AC_TEMPSCALING in selected else None
    predictors: dict[str, AccuracyPredictor] = {}
    for method in selected:
        predictors[method.value] = fit_predictor(
            calibration, method, settings=settings, temperature=temperature
        )
    if settings.combined_features:
        predictors[COMBINED] = fit_predictor(
            calibration,
            COMBINED,
            settings=settings,
            feature_keys=combined_keys(settings),
        )

    validation = tuple(
        measure(base, item.dataset, measured, settings, group=item.group, context=context)
        for item in targets_in(val_groups)
    )
    logger.info("measured %d validation shifts in %s", len(validation), ", ".join(val_groups))
    grouping = ",".join(val_groups)
    reports = {name: evaluate(predictor, validation, grouping) for name, predictor in predictors.items()}
    return ProtocolResult(
        base_name=base_name,
        cal_group=cal_group,
        val_groups=val_groups,
        predictors=predictors,
        reports=reports,
        calibration=calibration,
        validation=validation,
    )


def ensure_no_leakage(cal_groups: Iterable[str], val_groups: Iterable[str]) -> None:
    """Raise ``LeakageError`` when any validation group was used for calibration."""
    overlap = sorted(set(cal_groups) & set(val_groups))
    if overlap:
        raise LeakageError("calibration/validation leakage", details={"groups": overlap})


def run_protocol(
    datasets: Sequence[GroupedDataset] | str | Path,
    base_name: str,
    cal_group: str,
    val_group: str | Sequence[str],
    methods: Sequence[Method | str] | str = "all",
    settings: Settings | None = None,
) -> dict[str, EvaluationReport]:
    """Evaluation report per method (plus ``combined`` when configured)."""
    return calibrate_and_validate(
        datasets, base_name, cal_group, val_group, methods, settings
    ).reports


def combined_keys(settings: Settings) -> tuple[str, ...]:
    keys: list[str] = []
    for method in parse_methods(list(settings.combined_features)):
        key = FEATURE_KEY[method]
        if key is None:
            raise ConfigError("base_acc cannot feed the combined predictor")
        if key not in keys:
            keys.append(key)
    return tuple(keys)


def measured_methods(selected: Sequence[Method], settings: Settings) -> tuple[Method, ...]:
    """Selected methods plus those feeding the combined predictor."""
    extra = parse_methods(list(settings.combined_features)) if settings.combined_features else ()
    return tuple(dict.fromkeys((*selected, *extra)))
