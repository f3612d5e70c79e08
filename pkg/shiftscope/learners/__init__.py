"""In-house trainable models: logistic regression, OLS/ridge, MLP regressor."""

from shiftscope.learners.logistic import (
    LinearModel,
    fit_logistic,
    logistic_loss_and_grad,
    predict_proba,
)
from shiftscope.learners.mlp import MlpRegressor, fit_mlp_regressor, mlp_loss_and_grad
from shiftscope.learners.persist import (
    Regressor,
    regressor_from_arrays,
    regressor_to_arrays,
)
from shiftscope.learners.regression import LinearRegressor, fit_ols, mean_squared_error
from shiftscope.learners.scaling import Standardizer


def predict(regressor: Regressor, s: object) -> float:
    """Evaluate a fitted regressor on one feature vector."""
    return regressor.predict(s)  # type: ignore[arg-type]


__all__ = [
    "LinearModel",
    "LinearRegressor",
    "MlpRegressor",
    "Regressor",
    "Standardizer",
    "fit_logistic",
    "fit_mlp_regressor",
    "fit_ols",
    "logistic_loss_and_grad",
    "mean_squared_error",
    "mlp_loss_and_grad",
    "predict",
    "predict_proba",
    "regressor_from_arrays",
    "regressor_to_arrays",
]
