"""Rectifier MLP regressor trained by momentum SGD.

Defaults mirror the non-linear regression setup: hidden widths 512/256/128,
learning rate 1e-4, weight decay 1e-3, momentum 0.9, and a 20k-iteration cap
with early stopping once the full training MSE stops improving. Inputs and
targets are standardized with statistics stored on the fitted model.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from shiftscope.config import MlpConfig
from shiftscope.exceptions import DataError, FitError
from shiftscope.learners.scaling import Standardizer
from shiftscope.types import Matrix, Vector

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MlpRegressor:
    """Fitted network ``x -> relu(... relu(x W1 + b1) ...) W_L + b_L``.

    ``weights[i]`` has shape ``fan_in x fan_out``. Outputs are mapped back to
    target units with ``y_mean + y_scale * f(x)``.
    """

    weights: tuple[Matrix, ...]
    biases: tuple[Vector, ...]
    x_scaler: Standardizer
    y_mean: float = 0.0
    y_scale: float = 1.0

    def __post_init__(self) -> None:
        if len(self.weights) != len(self.biases) or not self.weights:
            raise FitError("MLP needs one bias per weight matrix")
        for left, right in zip(self.weights, self.weights[1:]):
            if left.shape[1] != right.shape[0]:
                raise FitError("MLP layer shapes do not chain")
        for weight, bias in zip(self.weights, self.biases):
            if bias.shape != (weight.shape[1],):
                raise FitError("MLP bias shape does not match its layer")
        if self.weights[-1].shape[1] != 1:
            raise FitError("MLP output layer must have one unit")

    @property
    def layer_sizes(self) -> tuple[int, ...]:
        return (self.weights[0].shape[0], *(w.shape[1] for w in self.weights))

    @property
    def n_features(self) -> int:
        return int(self.weights[0].shape[0])

    def predict_many(self, features: Matrix) -> Vector:
        s = np.asarray(features, dtype=np.float64)
        if s.ndim == 1:
            s = s.reshape(-1, self.n_features)
        if s.shape[1] != self.n_features:
            raise DataError(
                "feature width does not match the regressor",
                details={"expected": self.n_features, "got": s.shape[1]},
            )
        activations = _forward(self.weights, self.biases, self.x_scaler.transform(s))
        return self.y_mean + self.y_scale * activations[-1][:, 0]

    def predict(self, s: Vector | list[float] | float) -> float:
        row = np.atleast_1d(np.asarray(s, dtype=np.float64)).reshape(1, -1)
        return float(self.predict_many(row)[0])


def mlp_loss_and_grad(
    weights: tuple[Matrix, ...] | list[Matrix],
    biases: tuple[Vector, ...] | list[Vector],
    x: Matrix,
    y: Vector,
) -> tuple[float, list[Matrix], list[Vector]]:
    """Mean squared error of the raw network and its parameter gradients."""
    activations = _forward(weights, biases, x)
    n = x.shape[0]
    residual = activations[-1][:, 0] - y
    loss = float(np.mean(residual**2))

    delta = (2.0 / n) * residual.reshape(-1, 1)
    grad_weights: list[Matrix] = [np.empty(0)] * len(weights)
    grad_biases: list[Vector] = [np.empty(0)] * len(weights)
    for layer in range(len(weights) - 1, -1, -1):
        grad_weights[layer] = activations[layer].T @ delta
        grad_biases[layer] = delta.sum(axis=0)
        if layer:
            delta = (delta @ weights[layer].T) * (activations[layer] > 0)
    return loss, grad_weights, grad_biases


def fit_mlp_regressor(
    features: Matrix, targets: Vector, config: MlpConfig | None = None
) -> MlpRegressor:
    """Fit the MLP regressor by seeded mini-batch momentum SGD."""
    config = config or MlpConfig()
    s = np.asarray(features, dtype=np.float64)
    if s.ndim == 1:
        s = s.reshape(-1, 1)
    g = np.asarray(targets, dtype=np.float64).reshape(-1)
    if s.shape[0] < 1 or s.shape[0] != g.shape[0]:
        raise FitError("MLP needs at least one row and matching targets")
    if not (np.all(np.isfinite(s)) and np.all(np.isfinite(g))):
        raise FitError("non-finite input to the MLP regressor")

    x_scaler = Standardizer.fit(s)
    x = x_scaler.transform(s)
    y_mean = float(g.mean())
    y_scale = float(g.std()) or 1.0
    y = (g - y_mean) / y_scale

    rng = np.random.default_rng(config.seed)
    sizes = (s.shape[1], *config.hidden, 1)
    weights: list[Matrix] = []
    biases: list[Vector] = []
    for fan_in, fan_out in zip(sizes, sizes[1:]):
        bound = 1.0 / np.sqrt(fan_in)
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(rng.uniform(-bound, bound, size=fan_out))
    velocity_w = [np.zeros_like(w) for w in weights]
    velocity_b = [np.zeros_like(b) for b in biases]

    n = x.shape[0]
    full_batch = n <= config.batch_size
    order = np.arange(n)
    cursor = n
    best = [float(np.mean((_forward(weights, biases, x)[-1][:, 0] - y) ** 2))]

    for iteration in range(config.max_iter):
        if full_batch:
            batch = order
        else:
            if cursor + config.batch_size > n:
                order = rng.permutation(n)
                cursor = 0
            batch = order[cursor : cursor + config.batch_size]
            cursor += config.batch_size

        _, grad_w, grad_b = mlp_loss_and_grad(weights, biases, x[batch], y[batch])
        for layer in range(len(weights)):
            velocity_w[layer] = config.momentum * velocity_w[layer] + (
                grad_w[layer] + config.weight_decay * weights[layer]
            )
            velocity_b[layer] = config.momentum * velocity_b[layer] + grad_b[layer]
            weights[layer] = weights[layer] - config.learning_rate * velocity_w[layer]
            biases[layer] = biases[layer] - config.learning_rate * velocity_b[layer]

        loss = float(np.mean((_forward(weights, biases, x)[-1][:, 0] - y) ** 2))
        if not np.isfinite(loss):
            raise FitError("MLP training diverged", details={"iteration": iteration})
        best.append(min(best[-1], loss))
        if (
            len(best) > config.patience
            and best[-1 - config.patience] - best[-1] < config.min_improvement
        ):
            logger.debug("MLP early stop at iteration %d, mse %.3g", iteration, loss)
            break

    return MlpRegressor(
        weights=tuple(weights),
        biases=tuple(biases),
        x_scaler=x_scaler,
        y_mean=y_mean,
        y_scale=y_scale,
    )


def _forward(
    weights: tuple[Matrix, ...] | list[Matrix],
    biases: tuple[Vector, ...] | list[Vector],
    x: Matrix,
) -> list[Matrix]:
    """Inputs followed by each layer's output; hidden layers are rectified."""
    activations = [x]
    for layer, (weight, bias) in enumerate(zip(weights, biases)):
        out = activations[-1] @ weight + bias
        if layer < len(weights) - 1:
            out = np.maximum(out, 0.0)
        activations.append(out)
    return activations
