"""Synthetic task, shift families, calibrated oracles, and the demo run."""

from shiftscope.workbench.demo import DemoResult, build_demo_datasets, run_demo
from shiftscope.workbench.oracle import CalibratedOracle, make_calibrated_oracle
from shiftscope.workbench.shifts import DEFAULT_GRIDS, ShiftFamily, ShiftKind, apply_shift
from shiftscope.workbench.task import (
    LabeledSample,
    ReferenceClassifier,
    SyntheticTask,
    TaskSamples,
    gen_task,
    rotated_featurizations,
    to_grid,
    train_reference_classifier,
)

__all__ = [
    "DEFAULT_GRIDS",
    "CalibratedOracle",
    "DemoResult",
    "LabeledSample",
    "ReferenceClassifier",
    "ShiftFamily",
    "ShiftKind",
    "SyntheticTask",
    "TaskSamples",
    "apply_shift",
    "build_demo_datasets",
    "gen_task",
    "make_calibrated_oracle",
    "rotated_featurizations",
    "run_demo",
    "to_grid",
    "train_reference_classifier",
]
