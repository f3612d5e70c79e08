"""Accuracy predictors: fitted on calibration shifts, applied to new ones.

Regressor methods learn ``gap ~ R(S)`` on labeled calibration measurements
and predict ``clamp(base_acc - R(S), 0, 1)``. Regressor-free methods ignore
the calibration set apart from the temperature carried by
``ac_tempscaling``.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from shiftscope.confidence import Temperature, doc_feat_predict
from shiftscope.config import RegressorKind, Settings
from shiftscope.exceptions import DataError, FitError
from shiftscope.io.tensor import read_tensor, write_tensor
from shiftscope.learners import (
    Regressor,
    fit_mlp_regressor,
    fit_ols,
    regressor_from_arrays,
    regressor_to_arrays,
)
from shiftscope.pipeline.measurement import ShiftMeasurement
from shiftscope.pipeline.methods import COMBINED, FEATURE_KEY, Method, requires_regressor
from shiftscope.types import Matrix, Vector

logger = logging.getLogger(__name__)

PREDICTORS_FILE = "predictors.json"
PREDICTORS_VERSION = 1


@dataclass(frozen=True, eq=False)
class AccuracyPredictor:
    """A method plus whatever it fitted during calibration.

    Attributes:
        method: A ``Method`` value or ``"combined"``.
        regressor: Gap regressor; present exactly for regressor methods.
        fitted_temperature: Base-fitted temperature for ``ac_tempscaling``.
        feature_keys: Measurement features fed to the regressor, in order.
        base_name: Base dataset the calibration measurements were taken on.
        cal_groups: Group tags of the calibration targets, sorted.
    """

    method: str
    regressor: Regressor | None = None
    fitted_temperature: Temperature | None = None
    feature_keys: tuple[str, ...] = ()
    base_name: str = ""
    cal_groups: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "cal_groups", tuple(sorted(set(self.cal_groups))))
        if self.method != COMBINED:
            object.__setattr__(self, "method", Method(self.method).value)
        needs = requires_regressor(self.method)
        if needs != (self.regressor is not None):
            raise FitError(
                f"{self.method} {'requires' if needs else 'takes no'} gap regressor"
            )
        if needs and not self.feature_keys:
            key = FEATURE_KEY[Method(self.method)]
            assert key is not None
            object.__setattr__(self, "feature_keys", (key,))
        if self.regressor is not None and self.regressor.n_features != len(self.feature_keys):
            raise FitError("regressor width does not match its feature keys")

    def feature_vector(self, measurement: ShiftMeasurement) -> Vector:
        return np.asarray([measurement.feature(key) for key in self.feature_keys], dtype=np.float64)


def fit_predictor(
    calibration: Sequence[ShiftMeasurement],
    method: Method | str,
    regressor_kind: RegressorKind | None = None,
    settings: Settings | None = None,
    *,
    temperature: Temperature | None = None,
    feature_keys: Sequence[str] = (),
) -> AccuracyPredictor:
    """Fit one method on labeled calibration measurements.

    Args:
        calibration: Measurements of calibration targets against one base.
        method: Method name, or ``"combined"`` with ``feature_keys``.
        regressor_kind: ``linear`` or ``mlp``; defaults to ``settings.regressor``.
        settings: Ridge strength and MLP hyperparameters.
        temperature: Base-fitted temperature kept by ``ac_tempscaling``.
        feature_keys: Feature keys of the combined predictor.

    Raises:
        DataError: A calibration measurement has no true gap.
        FitError: Fewer than two calibration shifts for a regressor method.
    """
    settings = settings or Settings()
    kind = regressor_kind or settings.regressor
    method = method if method == COMBINED else Method(method).value
    unlabeled = [m.target_name for m in calibration if not m.is_labeled]
    if unlabeled:
        raise DataError(
            "unlabeled calibration measurement", details={"targets": unlabeled}
        )
    base_name = calibration[0].base_name if calibration else ""
    cal_groups = tuple(m.group for m in calibration)

    if not requires_regressor(method):
        kept = temperature if method == Method.AC_TEMPSCALING else None
        if method == Method.AC_TEMPSCALING and kept is None:
            raise FitError("ac_tempscaling needs the base-fitted temperature")
        return AccuracyPredictor(
            method=method, fitted_temperature=kept, base_name=base_name, cal_groups=cal_groups
        )

    if len(calibration) < 2:
        raise FitError(
            "need ≥ 2 calibration shifts",
            details={"method": method, "shifts": len(calibration)},
        )
    if method == COMBINED:
        if not feature_keys:
            raise FitError("combined predictor needs feature keys")
        keys = tuple(feature_keys)
    else:
        key = FEATURE_KEY[Method(method)]
        assert key is not None
        keys = (key,)

    s = _feature_matrix(calibration, keys)
    gaps = np.asarray([m.true_gap for m in calibration], dtype=np.float64)
    if kind == "mlp":
        regressor: Regressor = fit_mlp_regressor(s, gaps, settings.mlp)
    else:
        regressor = fit_ols(s, gaps, settings.ridge)
    logger.info("fitted %s %s regressor on %d shifts", method, kind, len(calibration))
    return AccuracyPredictor(
        method=method,
        regressor=regressor,
        feature_keys=keys,
        base_name=base_name,
        cal_groups=cal_groups,
    )


def predict_accuracy(predictor: AccuracyPredictor, measurement: ShiftMeasurement) -> float:
    """Predicted target accuracy, always within [0, 1]."""
    base_acc = measurement.base_acc_on_intersection
    match predictor.method:
        case Method.BASE_ACC:
            value = base_acc
        case Method.AC:
            value = measurement.feature("ac")
        case Method.AC_TEMPSCALING:
            value = measurement.feature("ac_tempscaling")
        case Method.DOC_FEAT:
            value = doc_feat_predict(base_acc, measurement.feature("doc"))
        case _:
            assert predictor.regressor is not None
            value = base_acc - predictor.regressor.predict(predictor.feature_vector(measurement))
    return min(1.0, max(0.0, float(value)))


def save_predictors(directory: str | Path, predictors: Mapping[str, AccuracyPredictor]) -> Path:
    """Write ``predictors.json`` plus one tensor file per regressor array."""
    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    records: list[dict[str, Any]] = []
    for name, predictor in sorted(predictors.items()):
        record: dict[str, Any] = {
            "name": name,
            "method": predictor.method,
            "feature_keys": list(predictor.feature_keys),
            "base": predictor.base_name,
            "cal_groups": list(predictor.cal_groups),
            "temperature": predictor.fitted_temperature.t if predictor.fitted_temperature else None,
        }
        if predictor.regressor is not None:
            meta, arrays = regressor_to_arrays(predictor.regressor)
            files: dict[str, str] = {}
            for key, array in arrays.items():
                files[key] = f"{name}.{key}.dsg"
                write_tensor(root / files[key], array)
            record["regressor"] = {**meta, "arrays": files}
        records.append(record)
    path = root / PREDICTORS_FILE
    path.write_text(
        json.dumps({"version": PREDICTORS_VERSION, "predictors": records}, indent=2, sort_keys=True)
        + "\n",
        encoding="utf-8",
    )
    logger.info("saved %d predictors to %s", len(records), path)
    return path


def load_predictors(directory: str | Path) -> dict[str, AccuracyPredictor]:
    root = Path(directory)
    path = root / PREDICTORS_FILE
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read predictors: {exc}", ref=str(path)) from exc
    if not isinstance(data, dict):
        raise DataError("predictors file must hold a JSON object", ref=str(path))
    if data.get("version") != PREDICTORS_VERSION:
        raise DataError(f"unsupported predictors version: {data.get('version')}", ref=str(path))

    loaded: dict[str, AccuracyPredictor] = {}
    for record in data.get("predictors", []):
        try:
            loaded[record["name"]] = _decode_record(root, record)
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise DataError(f"malformed predictor record: {exc}", ref=str(path)) from exc
    return loaded


def _decode_record(root: Path, record: dict[str, Any]) -> AccuracyPredictor:
    regressor = None
    if "regressor" in record:
        meta = dict(record["regressor"])
        files = meta.pop("arrays")
        arrays = {key: read_tensor(root / file) for key, file in files.items()}
        regressor = regressor_from_arrays(meta, arrays)
    temperature = record.get("temperature")
    if temperature is not None and not isinstance(temperature, (int, float)):
        raise TypeError(f"temperature must be a number, got {temperature!r}")
    groups = record.get("cal_groups", [])
    if not isinstance(groups, list) or not all(isinstance(group, str) for group in groups):
        raise TypeError("cal_groups must be a list of strings")
    return AccuracyPredictor(
        method=record["method"],
        regressor=regressor,
        fitted_temperature=Temperature(float(temperature)) if temperature is not None else None,
        feature_keys=tuple(record.get("feature_keys", ())),
        base_name=record.get("base", ""),
        cal_groups=tuple(groups),
    )


def _feature_matrix(measurements: Sequence[ShiftMeasurement], keys: Sequence[str]) -> Matrix:
    return np.asarray(
        [[m.feature(key) for key in keys] for m in measurements], dtype=np.float64
    ).reshape(len(measurements), len(keys))
