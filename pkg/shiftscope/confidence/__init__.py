"""Confidence-based shift measures and temperature scaling."""

from shiftscope.confidence.ece import expected_calibration_error
from shiftscope.confidence.summary import (
    ConfidenceSummary,
    doc,
    doc_feat_predict,
    doe,
    summarize,
    summarize_pair,
)
from shiftscope.confidence.temperature import (
    Temperature,
    apply_temperature,
    fit_temperature,
    temperature_nll,
)

__all__ = [
    "ConfidenceSummary",
    "Temperature",
    "apply_temperature",
    "doc",
    "doc_feat_predict",
    "doe",
    "expected_calibration_error",
    "fit_temperature",
    "summarize",
    "summarize_pair",
    "temperature_nll",
]
