import numpy as np
import pytest

from shiftscope.config import MlpConfig
from shiftscope.data import LabelSpace
from shiftscope.exceptions import DataError, FitError
from shiftscope.learners import (
    LinearRegressor,
    Standardizer,
    fit_logistic,
    fit_mlp_regressor,
    fit_ols,
    logistic_loss_and_grad,
    mean_squared_error,
    mlp_loss_and_grad,
    predict,
    predict_proba,
    regressor_from_arrays,
    regressor_to_arrays,
)


def numeric_gradient(f, array, eps=1e-6):
    grad = np.zeros_like(array)
    for index in np.ndindex(array.shape):
        saved = array[index]
        array[index] = saved + eps
        upper = f()
        array[index] = saved - eps
        lower = f()
        array[index] = saved
        grad[index] = (upper - lower) / (2 * eps)
    return grad


def assert_close_relative(analytic, numeric, tol=1e-5):
    scale = max(np.max(np.abs(numeric)), 1e-8)
    assert np.max(np.abs(analytic - numeric)) / scale < tol


@pytest.mark.parametrize("seed", range(20))
def test_logistic_gradient_matches_finite_differences(seed):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((20, 3))
    onehot = np.eye(4)[rng.integers(0, 4, size=20)]
    weights = rng.standard_normal((4, 3)) * 0.5
    bias = rng.standard_normal(4) * 0.5
    _, grad_w, grad_b = logistic_loss_and_grad(weights, bias, x, onehot, 0.1)

    def loss():
        return logistic_loss_and_grad(weights, bias, x, onehot, 0.1)[0]

    assert_close_relative(grad_w, numeric_gradient(loss, weights))
    assert_close_relative(grad_b, numeric_gradient(loss, bias))


@pytest.mark.parametrize("seed", range(20))
def test_mlp_gradient_matches_finite_differences(seed):
    rng = np.random.default_rng(100 + seed)
    x = rng.standard_normal((15, 3))
    y = rng.standard_normal(15)
    weights = [rng.standard_normal((3, 5)), rng.standard_normal((5, 4)), rng.standard_normal((4, 1))]
    biases = [rng.standard_normal(5) * 0.1, rng.standard_normal(4) * 0.1, rng.standard_normal(1)]
    _, grad_w, grad_b = mlp_loss_and_grad(weights, biases, x, y)

    def loss():
        return mlp_loss_and_grad(weights, biases, x, y)[0]

    for layer in range(3):
        assert_close_relative(grad_w[layer], numeric_gradient(loss, weights[layer]))
        assert_close_relative(grad_b[layer], numeric_gradient(loss, biases[layer]))


def test_logistic_fit_is_monotone_and_accurate():
    rng = np.random.default_rng(2)
    y = rng.integers(0, 3, size=600)
    centers = np.array([[0.0, 3.0], [3.0, 0.0], [-3.0, -3.0]])
    x = centers[y] + rng.standard_normal((600, 2))
    model = fit_logistic(x, y, 1e-3)
    history = np.asarray(model.loss_history)
    assert np.all(np.diff(history) <= 1e-12)
    probabilities = predict_proba(model, x)
    np.testing.assert_allclose(probabilities.sum(axis=1), 1.0)
    assert np.mean(np.argmax(probabilities, axis=1) == y) > 0.95


def test_heavy_l2_leaves_the_class_prior():
    rng = np.random.default_rng(6)
    y = rng.choice(3, size=1_000, p=[0.5, 0.3, 0.2])
    x = rng.standard_normal((1_000, 4)) + y[:, None]
    model = fit_logistic(x, y, 1e6)
    prior = np.bincount(y, minlength=3) / y.shape[0]
    assert np.max(np.abs(model.weights)) < 1e-4
    np.testing.assert_allclose(predict_proba(model, x), np.tile(prior, (1_000, 1)), atol=0.01)


def test_independent_labels_give_prior_level_predictions():
    rng = np.random.default_rng(7)
    x = rng.standard_normal((4_000, 5))
    y = rng.choice(3, size=4_000, p=[0.6, 0.3, 0.1])
    model = fit_logistic(x[:2_000], y[:2_000], 1e-3)
    probabilities = predict_proba(model, x[2_000:])
    prior = np.bincount(y[2_000:], minlength=3) / 2_000
    np.testing.assert_allclose(probabilities.mean(axis=0), prior, atol=0.03)
    assert np.mean(np.argmax(probabilities, axis=1) == y[2_000:]) <= prior.max() + 0.03


def test_logistic_declared_classes_allow_missing_ones():
    x = np.array([[0.0], [1.0], [2.0], [3.0]])
    y = np.array([0, 0, 2, 2])
    model = fit_logistic(x, y, 1e-2, classes=LabelSpace((0, 1, 2)))
    assert predict_proba(model, x).shape == (4, 3)


def test_logistic_rejects_bad_input():
    with pytest.raises(FitError, match="two classes"):
        fit_logistic(np.zeros((3, 1)), np.zeros(3, dtype=int), 0.0)
    with pytest.raises(FitError, match="non-finite"):
        fit_logistic(np.array([[np.nan], [1.0]]), np.array([0, 1]), 0.0)
    with pytest.raises(FitError, match="outside"):
        fit_logistic(np.zeros((2, 1)), np.array([0, 5]), 0.0, classes=LabelSpace((0, 1)))


def test_ols_recovers_exact_line():
    s = np.array([0.0, 1.0, 2.0, 3.0])
    g = 0.5 * s - 0.25
    regressor = fit_ols(s, g)
    assert regressor.weights[0] == pytest.approx(0.5)
    assert regressor.bias == pytest.approx(-0.25)
    assert predict(regressor, 10.0) == pytest.approx(4.75)


def test_ols_residuals_are_orthogonal_to_design():
    rng = np.random.default_rng(3)
    s = rng.standard_normal((40, 3))
    g = rng.standard_normal(40)
    regressor = fit_ols(s, g)
    residual = g - regressor.predict_many(s)
    design = np.hstack([s, np.ones((40, 1))])
    np.testing.assert_allclose(design.T @ residual, 0.0, atol=1e-9)


def test_ols_singular_and_underdetermined():
    s = np.array([[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]])
    with pytest.raises(FitError, match="singular"):
        fit_ols(s, np.array([1.0, 2.0, 3.0]))
    with pytest.raises(FitError, match="at least 2 rows"):
        fit_ols(np.array([1.0]), np.array([1.0]))


def test_ridge_handles_collinear_features_and_shrinks():
    s = np.array([[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]])
    g = np.array([1.0, 2.0, 3.0])
    ridged = fit_ols(s, g, ridge=1.0)
    assert np.all(np.isfinite(ridged.weights))
    plain = fit_ols(s[:, :1], g)
    light = fit_ols(s[:, :1], g, ridge=10.0)
    assert abs(light.weights[0]) < abs(plain.weights[0])


def test_linear_regressor_width_check():
    regressor = LinearRegressor(weights=np.array([1.0, 2.0]), bias=0.0)
    with pytest.raises(DataError, match="does not match"):
        regressor.predict([1.0])


def test_mlp_fits_a_smooth_curve():
    s = np.linspace(-2.0, 2.0, 80).reshape(-1, 1)
    g = np.sin(s[:, 0])
    config = MlpConfig(hidden=(32, 16), learning_rate=5e-3, max_iter=5_000, seed=0)
    regressor = fit_mlp_regressor(s, g, config)
    assert mean_squared_error(regressor, s, g) < 0.02
    assert regressor.layer_sizes == (1, 32, 16, 1)


@pytest.mark.slow
def test_default_mlp_fits_an_exact_line():
    s = np.linspace(0.0, 0.3, 8).reshape(-1, 1)
    g = 0.8 * s[:, 0] + 0.02
    regressor = fit_mlp_regressor(s, g)
    assert mean_squared_error(regressor, s, g) < 1e-4


@pytest.mark.slow
def test_default_mlp_is_no_worse_than_least_squares():
    rng = np.random.default_rng(8)
    s = rng.uniform(0.0, 0.3, size=(12, 1))
    g = 0.8 * s[:, 0] + 0.02 + rng.normal(0.0, 0.01, size=12)
    ols = fit_ols(s, g)
    ols_mse = float(np.mean((ols.predict_many(s) - g) ** 2))
    assert mean_squared_error(fit_mlp_regressor(s, g), s, g) <= ols_mse + 1e-3


@pytest.mark.slow
def test_default_mlp_on_constant_targets():
    s = np.linspace(0.0, 0.3, 8).reshape(-1, 1)
    g = np.full(8, 0.1)
    regressor = fit_mlp_regressor(s, g)
    predictions = regressor.predict_many(s)
    assert np.all(np.isfinite(predictions))
    np.testing.assert_allclose(predictions, 0.1, atol=1e-2)


def test_mlp_is_deterministic_for_a_seed():
    rng = np.random.default_rng(4)
    s = rng.standard_normal((30, 2))
    g = s[:, 0] - s[:, 1]
    config = MlpConfig(hidden=(8,), max_iter=100, seed=9)
    first = fit_mlp_regressor(s, g, config)
    second = fit_mlp_regressor(s, g, config)
    np.testing.assert_array_equal(first.predict_many(s), second.predict_many(s))


def test_mlp_rejects_non_finite_input():
    with pytest.raises(FitError, match="non-finite"):
        fit_mlp_regressor(np.array([[np.inf]]), np.array([1.0]))


def test_regressor_arrays_restore_predictions():
    rng = np.random.default_rng(5)
    s = rng.standard_normal((20, 2))
    g = s @ np.array([0.3, -0.1]) + 0.05
    for regressor in (
        fit_ols(s, g),
        fit_mlp_regressor(s, g, MlpConfig(hidden=(4,), max_iter=20)),
    ):
        meta, arrays = regressor_to_arrays(regressor)
        restored = regressor_from_arrays(meta, arrays)
        np.testing.assert_array_equal(restored.predict_many(s), regressor.predict_many(s))


def test_regressor_from_arrays_errors():
    with pytest.raises(DataError, match="unknown regressor kind"):
        regressor_from_arrays({"kind": "forest"}, {})
    with pytest.raises(DataError, match="incomplete"):
        regressor_from_arrays({"kind": "linear"}, {})


def test_standardizer_keeps_constant_columns_finite():
    rows = np.array([[1.0, 5.0], [3.0, 5.0]])
    scaler = Standardizer.fit(rows)
    np.testing.assert_allclose(scaler.transform(rows), [[-1.0, 0.0], [1.0, 0.0]])
