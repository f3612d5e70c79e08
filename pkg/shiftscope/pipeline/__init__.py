"""Measure shifts, fit accuracy predictors, and evaluate them."""

from shiftscope.pipeline.evaluation import (
    AggregateScore,
    EvaluationReport,
    EvaluationRow,
    average_reports,
    evaluate,
    pool_reports,
)
from shiftscope.pipeline.measurement import (
    MeasureContext,
    ShiftMeasurement,
    check_modalities,
    measure,
)
from shiftscope.pipeline.methods import (
    ALL_METHODS,
    COMBINED,
    REGRESSOR_FREE,
    Method,
    Modality,
    parse_methods,
    requires_regressor,
)
from shiftscope.pipeline.predictor import (
    AccuracyPredictor,
    fit_predictor,
    load_predictors,
    predict_accuracy,
    save_predictors,
)
from shiftscope.pipeline.protocol import (
    ProtocolResult,
    calibrate_and_validate,
    combined_keys,
    ensure_no_leakage,
    measured_methods,
    run_protocol,
)
from shiftscope.pipeline.table import render_markdown_table, render_summary_table

__all__ = [
    "ALL_METHODS",
    "COMBINED",
    "REGRESSOR_FREE",
    "AccuracyPredictor",
    "AggregateScore",
    "EvaluationReport",
    "EvaluationRow",
    "MeasureContext",
    "Method",
    "Modality",
    "ProtocolResult",
    "ShiftMeasurement",
    "average_reports",
    "calibrate_and_validate",
    "check_modalities",
    "combined_keys",
    "ensure_no_leakage",
    "evaluate",
    "fit_predictor",
    "load_predictors",
    "measure",
    "measured_methods",
    "parse_methods",
    "pool_reports",
    "predict_accuracy",
    "render_markdown_table",
    "render_summary_table",
    "requires_regressor",
    "run_protocol",
    "save_predictors",
]
