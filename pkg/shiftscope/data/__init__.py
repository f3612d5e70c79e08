"""Datasets, label spaces, restriction, and accuracy."""

from shiftscope.data.dataset import (
    Dataset,
    DatasetView,
    accuracy,
    accuracy_gap,
    intersect_labels,
    predict_label,
    predict_labels,
    restrict,
)
from shiftscope.data.labels import LabelSpace

__all__ = [
    "Dataset",
    "DatasetView",
    "LabelSpace",
    "accuracy",
    "accuracy_gap",
    "intersect_labels",
    "predict_label",
    "predict_labels",
    "restrict",
]
