"""Ordinary least squares and ridge regression by normal equations.

Features and targets are centered first, so the ridge term touches only the
weights and the bias is recovered as ``mean(g) - mean(S) @ w``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from shiftscope.exceptions import DataError, FitError
from shiftscope.types import Matrix, Vector


@dataclass(frozen=True, eq=False)
class LinearRegressor:
    weights: Vector
    bias: float

    def __post_init__(self) -> None:
        weights = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        if not (np.all(np.isfinite(weights)) and np.isfinite(self.bias)):
            raise FitError("linear regressor parameters must be finite")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "bias", float(self.bias))

    @property
    def n_features(self) -> int:
        return int(self.weights.shape[0])

    def predict(self, s: Vector | list[float] | float) -> float:
        row = np.atleast_1d(np.asarray(s, dtype=np.float64)).reshape(-1)
        if row.shape[0] != self.n_features:
            raise DataError(
                "feature vector length does not match the regressor",
                details={"expected": self.n_features, "got": row.shape[0]},
            )
        return float(row @ self.weights + self.bias)

    def predict_many(self, features: Matrix) -> Vector:
        s = _as_design(features)
        if s.shape[1] != self.n_features:
            raise DataError("feature matrix width does not match the regressor")
        return s @ self.weights + self.bias


def fit_ols(features: Matrix, targets: Vector, ridge: float = 0.0) -> LinearRegressor:
    """Least-squares fit of ``targets ~ features @ w + b`` with optional ridge.

    Args:
        features: ``P x M`` feature matrix (a length-``P`` vector means M = 1).
        targets: Length-``P`` regression targets.
        ridge: Non-negative penalty on ``||w||^2``.
    """
    s = _as_design(features)
    g = np.asarray(targets, dtype=np.float64).reshape(-1)
    p, m = s.shape
    if g.shape[0] != p:
        raise FitError("features and targets must have the same number of rows")
    if not (np.all(np.isfinite(s)) and np.all(np.isfinite(g))):
        raise FitError("non-finite input to least squares")
    if ridge < 0:
        raise FitError("ridge must be non-negative")
    if p < 1 or (ridge == 0 and p < m + 1):
        raise FitError(
            f"least squares needs at least {m + 1} rows without ridge, got {p}",
            details={"rows": p, "features": m},
        )

    s_mean = s.mean(axis=0)
    g_mean = float(g.mean())
    centered = s - s_mean
    gram = centered.T @ centered + ridge * np.eye(m)
    if ridge == 0 and np.linalg.matrix_rank(gram) < m:
        raise FitError(
            "singular least-squares system; use ridge > 0",
            details={"rank": int(np.linalg.matrix_rank(gram)), "features": m},
        )
    weights = np.linalg.solve(gram, centered.T @ (g - g_mean))
    return LinearRegressor(weights=weights, bias=g_mean - float(s_mean @ weights))


def mean_squared_error(regressor: object, features: Matrix, targets: Vector) -> float:
    predictions = regressor.predict_many(features)  # type: ignore[attr-defined]
    return float(np.mean((predictions - np.asarray(targets, dtype=np.float64)) ** 2))


def _as_design(features: Matrix | Vector) -> Matrix:
    s = np.asarray(features, dtype=np.float64)
    if s.ndim == 1:
        s = s.reshape(-1, 1)
    if s.ndim != 2:
        raise FitError("features must be a vector or a matrix")
    return s
