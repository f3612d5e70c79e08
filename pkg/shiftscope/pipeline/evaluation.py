"""Per-target errors and their MAE/std summaries."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from shiftscope.exceptions import DataError
from shiftscope.io.reports import EVALUATION_HEADER, render_csv
from shiftscope.pipeline.measurement import ShiftMeasurement
from shiftscope.pipeline.predictor import AccuracyPredictor, predict_accuracy


@dataclass(frozen=True, slots=True)
class EvaluationRow:
    target: str
    group: str
    true_acc: float
    pred_acc: float
    abs_err: float

    def __post_init__(self) -> None:
        if abs(self.abs_err - abs(self.pred_acc - self.true_acc)) > 1e-12:
            raise DataError("abs_err must equal |pred_acc - true_acc|")

    @classmethod
    def of(cls, target: str, group: str, true_acc: float, pred_acc: float) -> EvaluationRow:
        return cls(target, group, true_acc, pred_acc, abs(pred_acc - true_acc))


@dataclass(frozen=True)
class EvaluationReport:
    """Errors of one method over a set of validation targets.

    ``std`` is the population standard deviation of the absolute errors.
    """

    method: str
    grouping: str
    rows: tuple[EvaluationRow, ...]
    mae: float
    std: float

    def __post_init__(self) -> None:
        if not self.rows:
            raise DataError("evaluation needs at least one validation target")

    @classmethod
    def from_rows(cls, method: str, grouping: str, rows: Sequence[EvaluationRow]) -> EvaluationReport:
        if not rows:
            raise DataError(
                "evaluation needs at least one validation target", details={"method": method}
            )
        errors = np.asarray([row.abs_err for row in rows], dtype=np.float64)
        return cls(
            method=method,
            grouping=grouping,
            rows=tuple(rows),
            mae=float(errors.mean()),
            std=float(errors.std()),
        )

    def by_group(self) -> dict[str, EvaluationReport]:
        groups: dict[str, list[EvaluationRow]] = {}
        for row in self.rows:
            groups.setdefault(row.group, []).append(row)
        return {
            group: EvaluationReport.from_rows(self.method, group, rows)
            for group, rows in groups.items()
        }

    def csv(self) -> str:
        return render_csv(
            EVALUATION_HEADER,
            ((row.target, row.true_acc, row.pred_acc, row.abs_err) for row in self.rows),
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "method": self.method,
            "grouping": self.grouping,
            "mae": self.mae,
            "std": self.std,
            "targets": len(self.rows),
        }


@dataclass(frozen=True, slots=True)
class AggregateScore:
    """MAE and std averaged over independently trained models."""

    mae: float
    std: float
    n_models: int


def evaluate(
    predictor: AccuracyPredictor,
    validation: Sequence[ShiftMeasurement],
    grouping: str = "",
) -> EvaluationReport:
    """Score ``predictor`` on labeled validation measurements."""
    rows: list[EvaluationRow] = []
    for measurement in validation:
        if measurement.true_target_acc is None:
            raise DataError(
                f"labels required on validation target {measurement.target_name}",
                details={"method": predictor.method},
            )
        predicted = predict_accuracy(predictor, measurement)
        rows.append(
            EvaluationRow.of(
                measurement.target_name,
                measurement.group,
                measurement.true_target_acc,
                predicted,
            )
        )
    grouping = grouping or ",".join(dict.fromkeys(m.group for m in validation))
    return EvaluationReport.from_rows(predictor.method, grouping, rows)


def pool_reports(reports: Sequence[EvaluationReport], grouping: str = "pooled") -> EvaluationReport:
    """Pool every (model, target) error of one method into a single report."""
    if not reports:
        raise DataError("nothing to pool")
    methods = {report.method for report in reports}
    if len(methods) != 1:
        raise DataError("pooled reports must share one method", details={"methods": sorted(methods)})
    rows = [row for report in reports for row in report.rows]
    return EvaluationReport.from_rows(reports[0].method, grouping, rows)


def average_reports(reports: Sequence[EvaluationReport]) -> AggregateScore:
    """Mean of the per-model MAE and std values."""
    if not reports:
        raise DataError("nothing to average")
    return AggregateScore(
        mae=math.fsum(report.mae for report in reports) / len(reports),
        std=math.fsum(report.std for report in reports) / len(reports),
        n_models=len(reports),
    )
