"""Multinomial logistic regression by full-batch gradient descent.

Minimizes mean negative log-likelihood plus ``l2 / 2 * ||W||^2`` (the bias is
not penalized). Steps use a Barzilai-Borwein initial guess followed by
Armijo backtracking, so the training loss never increases between
iterations. Weights start at zero, which makes the convex fit independent of
any seed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.special import log_softmax, softmax

from shiftscope.data.labels import LabelSpace
from shiftscope.exceptions import DataError, FitError
from shiftscope.types import IndexVector, Matrix, Vector

logger = logging.getLogger(__name__)

_ARMIJO = 1e-4
_MAX_HALVINGS = 60


@dataclass(frozen=True, eq=False)
class LinearModel:
    """Fitted softmax classifier: ``softmax(x @ weights.T + bias)``.

    Attributes:
        weights: ``K x D`` weight matrix.
        bias: Length-``K`` bias vector.
        classes: Class ids of the ``K`` outputs.
        loss_history: Training objective after every accepted step.
    """

    weights: Matrix
    bias: Vector
    classes: LabelSpace
    loss_history: tuple[float, ...] = field(default=(), repr=False)

    def __post_init__(self) -> None:
        if not (np.all(np.isfinite(self.weights)) and np.all(np.isfinite(self.bias))):
            raise FitError("linear model parameters must be finite")

    @property
    def n_features(self) -> int:
        return int(self.weights.shape[1])


def logistic_loss_and_grad(
    weights: Matrix, bias: Vector, x: Matrix, onehot: Matrix, l2: float
) -> tuple[float, Matrix, Vector]:
    """Objective value and its gradients with respect to weights and bias."""
    n = x.shape[0]
    log_probs = log_softmax(x @ weights.T + bias, axis=1)
    loss = -float(np.sum(onehot * log_probs)) / n + 0.5 * l2 * float(np.sum(weights**2))
    residual = (np.exp(log_probs) - onehot) / n
    grad_weights = residual.T @ x + l2 * weights
    grad_bias = residual.sum(axis=0)
    return loss, grad_weights, grad_bias


def fit_logistic(
    x: Matrix,
    y: IndexVector,
    l2: float = 0.0,
    *,
    classes: LabelSpace | None = None,
    max_iter: int = 5_000,
    tol: float = 1e-6,
) -> LinearModel:
    """Fit an L2-regularized multinomial logistic model.

    Args:
        x: ``N x D`` inputs.
        y: Length-``N`` class ids.
        l2: Non-negative L2 strength on the weights.
        classes: Output classes; defaults to the ids present in ``y``.
        max_iter: Iteration cap.
        tol: Stop once the gradient norm falls below this value.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64).reshape(-1)
    if x.ndim != 2 or x.shape[0] != y.shape[0]:
        raise FitError("inputs and labels must have matching row counts")
    if not np.all(np.isfinite(x)):
        raise FitError("non-finite input to logistic regression")
    if l2 < 0:
        raise FitError("l2 must be non-negative")
    classes = classes or LabelSpace.of(y.tolist())
    if len(np.unique(y)) < 2:
        raise FitError("logistic regression needs at least two classes present")
    if not np.all(np.isin(y, classes.as_array())):
        raise FitError("labels outside the declared output classes")

    onehot = np.zeros((x.shape[0], len(classes)))
    onehot[np.arange(x.shape[0]), np.searchsorted(classes.as_array(), y)] = 1.0

    k, d = len(classes), x.shape[1]
    theta = np.zeros(k * d + k)

    def evaluate(params: Vector) -> tuple[float, Vector]:
        loss, grad_w, grad_b = logistic_loss_and_grad(
            params[: k * d].reshape(k, d), params[k * d :], x, onehot, l2
        )
        return loss, np.concatenate([grad_w.ravel(), grad_b])

    loss, grad = evaluate(theta)
    history = [loss]
    step = 1.0
    for iteration in range(max_iter):
        grad_norm_sq = float(grad @ grad)
        if grad_norm_sq < tol**2:
            break
        trial = step
        for _ in range(_MAX_HALVINGS):
            candidate = theta - trial * grad
            candidate_loss, candidate_grad = evaluate(candidate)
            if candidate_loss <= loss - _ARMIJO * trial * grad_norm_sq:
                break
            trial *= 0.5
        else:
            logger.debug("line search stalled at iteration %d", iteration)
            break
        delta_theta = candidate - theta
        delta_grad = candidate_grad - grad
        curvature = float(delta_theta @ delta_grad)
        step = float(delta_theta @ delta_theta) / curvature if curvature > 0 else 2 * trial
        step = min(max(step, 1e-10), 1e10)
        theta, loss, grad = candidate, candidate_loss, candidate_grad
        history.append(loss)

    logger.debug("logistic fit: %d steps, loss %.6g", len(history) - 1, loss)
    return LinearModel(
        weights=theta[: k * d].reshape(k, d).copy(),
        bias=theta[k * d :].copy(),
        classes=classes,
        loss_history=tuple(history),
    )


def predict_proba(model: LinearModel, x: Matrix) -> Matrix:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != model.n_features:
        raise DataError(
            "input width does not match the model",
            details={"expected": model.n_features, "got": x.shape},
        )
    return softmax(x @ model.weights.T + model.bias, axis=1)
