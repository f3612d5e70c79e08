"""Regressor parameters as named arrays for tensor-file storage."""

from __future__ import annotations

from typing import Any

import numpy as np

from shiftscope.exceptions import DataError
from shiftscope.learners.mlp import MlpRegressor
from shiftscope.learners.regression import LinearRegressor
from shiftscope.learners.scaling import Standardizer

Regressor = LinearRegressor | MlpRegressor


def regressor_to_arrays(regressor: Regressor) -> tuple[dict[str, Any], dict[str, np.ndarray]]:
    """Split a regressor into JSON metadata and named parameter arrays."""
    if isinstance(regressor, LinearRegressor):
        return {"kind": "linear"}, {
            "weights": regressor.weights,
            "bias": np.asarray([regressor.bias]),
        }
    arrays: dict[str, np.ndarray] = {
        "x_mean": regressor.x_scaler.mean,
        "x_scale": regressor.x_scaler.scale,
        "y": np.asarray([regressor.y_mean, regressor.y_scale]),
    }
    for layer, (weight, bias) in enumerate(zip(regressor.weights, regressor.biases)):
        arrays[f"w{layer}"] = weight
        arrays[f"b{layer}"] = bias
    return {"kind": "mlp", "layers": len(regressor.weights)}, arrays


def regressor_from_arrays(meta: dict[str, Any], arrays: dict[str, np.ndarray]) -> Regressor:
    try:
        if meta["kind"] == "linear":
            return LinearRegressor(weights=arrays["weights"], bias=float(arrays["bias"][0]))
        if meta["kind"] == "mlp":
            layers = int(meta["layers"])
            return MlpRegressor(
                weights=tuple(arrays[f"w{layer}"] for layer in range(layers)),
                biases=tuple(arrays[f"b{layer}"] for layer in range(layers)),
                x_scaler=Standardizer(mean=arrays["x_mean"], scale=arrays["x_scale"]),
                y_mean=float(arrays["y"][0]),
                y_scale=float(arrays["y"][1]),
            )
    except (KeyError, IndexError, ValueError) as exc:
        raise DataError(f"incomplete regressor parameters: {exc}") from exc
    raise DataError(f"unknown regressor kind: {meta.get('kind')}")
