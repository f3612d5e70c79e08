"""Public API for predicting classifier accuracy under distribution shift."""

from shiftscope.config import (
    DiscriminatorConfig,
    MlpConfig,
    RotationConfig,
    Settings,
    TemperatureConfig,
    load_settings,
)
from shiftscope.confidence import (
    ConfidenceSummary,
    Temperature,
    apply_temperature,
    doc,
    doc_feat_predict,
    doe,
    expected_calibration_error,
    fit_temperature,
    summarize,
)
from shiftscope.data import (
    Dataset,
    DatasetView,
    LabelSpace,
    accuracy,
    accuracy_gap,
    intersect_labels,
    predict_label,
    restrict,
)
from shiftscope.distances import (
    DiscriminatorReport,
    RotationReport,
    a_proxy,
    discriminative_distance,
    frechet,
    mmd,
    rotation_score,
)
from shiftscope.exceptions import (
    ConfigError,
    DataError,
    FitError,
    LabelSpaceError,
    LeakageError,
    ManifestError,
    ShiftScopeError,
    TensorLoadError,
)
from shiftscope.io import (
    GroupedDataset,
    SplitSpec,
    load_manifest,
    make_splits,
    read_tensor,
    write_manifest,
    write_tensor,
)
from shiftscope.learners import (
    LinearModel,
    LinearRegressor,
    MlpRegressor,
    fit_logistic,
    fit_mlp_regressor,
    fit_ols,
    predict,
    predict_proba,
)
from shiftscope.pipeline import (
    AccuracyPredictor,
    EvaluationReport,
    Method,
    ShiftMeasurement,
    evaluate,
    fit_predictor,
    load_predictors,
    measure,
    predict_accuracy,
    render_summary_table,
    run_protocol,
    save_predictors,
)
from shiftscope.workbench import (
    ShiftFamily,
    ShiftKind,
    apply_shift,
    gen_task,
    make_calibrated_oracle,
    run_demo,
    train_reference_classifier,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyPredictor",
    "ConfidenceSummary",
    "ConfigError",
    "DataError",
    "Dataset",
    "DatasetView",
    "DiscriminatorConfig",
    "DiscriminatorReport",
    "EvaluationReport",
    "FitError",
    "GroupedDataset",
    "LabelSpace",
    "LabelSpaceError",
    "LeakageError",
    "LinearModel",
    "LinearRegressor",
    "ManifestError",
    "Method",
    "MlpConfig",
    "MlpRegressor",
    "RotationConfig",
    "RotationReport",
    "Settings",
    "ShiftFamily",
    "ShiftKind",
    "ShiftMeasurement",
    "ShiftScopeError",
    "SplitSpec",
    "Temperature",
    "TemperatureConfig",
    "TensorLoadError",
    "a_proxy",
    "accuracy",
    "accuracy_gap",
    "apply_shift",
    "apply_temperature",
    "discriminative_distance",
    "doc",
    "doc_feat_predict",
    "doe",
    "evaluate",
    "expected_calibration_error",
    "fit_logistic",
    "fit_mlp_regressor",
    "fit_ols",
    "fit_predictor",
    "fit_temperature",
    "frechet",
    "gen_task",
    "intersect_labels",
    "load_manifest",
    "load_predictors",
    "load_settings",
    "make_calibrated_oracle",
    "make_splits",
    "measure",
    "mmd",
    "predict",
    "predict_accuracy",
    "predict_label",
    "predict_proba",
    "read_tensor",
    "render_summary_table",
    "restrict",
    "rotation_score",
    "run_demo",
    "run_protocol",
    "save_predictors",
    "summarize",
    "train_reference_classifier",
    "write_manifest",
    "write_tensor",
]
