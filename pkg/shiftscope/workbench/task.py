"""Synthetic classification task and its reference classifier.

Inputs are isotropic Gaussian blobs whose class means lie on a sphere. The
sphere radius is bisected until the Bayes (nearest-mean) classifier scores
the requested accuracy, so base accuracies land in the 0.7-0.9 range the
shift experiments need. Every input also has an 8x8 grid layout: the first
``d`` cells in row-major order hold the input and the rest are zero. The
grid drives the rotated featurizations and the rotation confound shift.

The reference classifier reads each input with its norm capped at the median
training norm. Nearest-mean decisions are unchanged by the cap, but inputs
that extra noise or translation pushes outward no longer inflate the logits,
so confidence falls as the shift grows.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from shiftscope.data import Dataset, LabelSpace, accuracy
from shiftscope.exceptions import ConfigError, FitError
from shiftscope.learners import LinearModel, fit_logistic, predict_proba
from shiftscope.types import IndexVector, Matrix

logger = logging.getLogger(__name__)

GRID_SIDE = 8
GRID_CELLS = GRID_SIDE * GRID_SIDE
RADIUS_STEPS = 20
ACCURACY_RANGE = (0.7, 0.9)
_SEARCH_ROWS = 4_000


def rng_for(*keys: int) -> np.random.Generator:
    """Independent PCG64 stream for a tuple of non-negative integer keys."""
    return np.random.Generator(np.random.PCG64([int(key) for key in keys]))


@dataclass(frozen=True, eq=False)
class SyntheticTask:
    """Gaussian-blob generative process.

    Attributes:
        k: Class count.
        d: Input dimension, at most 64 so inputs fit the grid.
        class_means: ``K x D`` class means.
        class_cov_scale: Isotropic per-class variance.
        seed: Seed the task was generated from.
    """

    k: int
    d: int
    class_means: Matrix
    class_cov_scale: float
    seed: int

    def __post_init__(self) -> None:
        if self.k < 2 or self.d < 2:
            raise ConfigError("synthetic task needs k >= 2 and d >= 2", details={"k": self.k, "d": self.d})
        if self.d > GRID_CELLS:
            raise ConfigError(f"inputs must fit the {GRID_SIDE}x{GRID_SIDE} grid", details={"d": self.d})
        means = np.asarray(self.class_means, dtype=np.float64)
        if means.shape != (self.k, self.d):
            raise ConfigError("class_means must be k x d", details={"shape": means.shape})
        if np.unique(means, axis=0).shape[0] != self.k:
            raise ConfigError("class means must be pairwise distinct")
        if self.class_cov_scale <= 0:
            raise ConfigError("class_cov_scale must be positive")
        means.flags.writeable = False
        object.__setattr__(self, "class_means", means)

    @property
    def label_space(self) -> LabelSpace:
        return LabelSpace.range(self.k)

    @property
    def radius(self) -> float:
        """Radius of the sphere the class means lie on."""
        return float(np.linalg.norm(self.class_means, axis=1).mean())

    def sample(
        self,
        n: int,
        rng: np.random.Generator,
        *,
        means: Matrix | None = None,
        cov_scale: float | None = None,
        classes: LabelSpace | None = None,
    ) -> tuple[Matrix, IndexVector]:
        """Draw ``n`` labeled inputs, optionally from a modified process."""
        means = self.class_means if means is None else np.asarray(means, dtype=np.float64)
        cov_scale = self.class_cov_scale if cov_scale is None else cov_scale
        pool = (classes or self.label_space).as_array()
        labels = rng.choice(pool, size=n)
        noise = rng.standard_normal((n, self.d)) * np.sqrt(cov_scale)
        return means[labels] + noise, labels.astype(np.int64)


@dataclass(frozen=True, eq=False)
class LabeledSample:
    x: Matrix
    y: IndexVector

    @property
    def n(self) -> int:
        return int(self.y.shape[0])


@dataclass(frozen=True, eq=False)
class TaskSamples:
    train: LabeledSample
    val: LabeledSample
    test: LabeledSample

    def items(self) -> tuple[tuple[str, LabeledSample], ...]:
        return (("train", self.train), ("val", self.val), ("test", self.test))


def nearest_mean_accuracy(means: Matrix, x: Matrix, y: IndexVector) -> float:
    distances = ((x[:, None, :] - means[None, :, :]) ** 2).sum(axis=2)
    return float(np.mean(np.argmin(distances, axis=1) == y))


def gen_task(
    seed: int,
    k: int = 10,
    d: int = 16,
    *,
    n: int = 2_000,
    target_accuracy: float = 0.8,
    cov_scale: float = 1.0,
) -> tuple[SyntheticTask, TaskSamples]:
    """Generate a task plus labeled train/val/test samples of ``n`` rows each.

    Raises:
        ConfigError: ``k < 2``, ``d < 2`` or fewer than 50 rows per class.
        FitError: The radius search cannot reach the accuracy range.
    """
    if k < 2 or d < 2:
        raise ConfigError("synthetic task needs k >= 2 and d >= 2", details={"k": k, "d": d})
    if k * 50 > n:
        raise ConfigError("need at least 50 rows per class in every split", details={"k": k, "n": n})

    directions = rng_for(seed, 0).standard_normal((k, d))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)

    search_rng = rng_for(seed, 1)
    search_y = search_rng.integers(0, k, size=_SEARCH_ROWS)
    search_noise = search_rng.standard_normal((_SEARCH_ROWS, d)) * np.sqrt(cov_scale)

    def score(radius: float) -> float:
        means = radius * directions
        return nearest_mean_accuracy(means, means[search_y] + search_noise, search_y)

    low, high = 0.0, 1.0
    while score(high) < target_accuracy and high < 1e3:
        high *= 2.0
    for _ in range(RADIUS_STEPS):
        middle = (low + high) / 2.0
        if score(middle) < target_accuracy:
            low = middle
        else:
            high = middle
    radius = (low + high) / 2.0
    reached = score(radius)
    if not ACCURACY_RANGE[0] <= reached <= ACCURACY_RANGE[1]:
        raise FitError(
            "infeasible accuracy target",
            details={"target": target_accuracy, "reached": reached, "radius": radius},
        )
    logger.info("task seed %d: radius %.4f, nearest-mean accuracy %.4f", seed, radius, reached)

    task = SyntheticTask(k=k, d=d, class_means=radius * directions, class_cov_scale=cov_scale, seed=seed)
    samples = TaskSamples(
        *(LabeledSample(*task.sample(n, rng_for(seed, 2, split))) for split in range(3))
    )
    return task, samples


def to_grid(x: Matrix) -> np.ndarray:
    """``N x 8 x 8`` grid layout of ``N x D`` inputs."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    grid = np.zeros((x.shape[0], GRID_CELLS))
    grid[:, : x.shape[1]] = x
    return grid.reshape(-1, GRID_SIDE, GRID_SIDE)


def from_grid(grid: np.ndarray, d: int) -> Matrix:
    return grid.reshape(grid.shape[0], GRID_CELLS)[:, :d].copy()


def rotated_featurizations(grid: np.ndarray) -> tuple[Matrix, ...]:
    """Flattened grids rotated by 0, 90, 180 and 270 degrees."""
    return tuple(
        np.rot90(grid, turns, axes=(1, 2)).reshape(grid.shape[0], GRID_CELLS)
        for turns in range(4)
    )


def cap_norms(x: Matrix, cap: float) -> Matrix:
    """Rows of ``x`` rescaled so no norm exceeds ``cap``; shorter rows are untouched."""
    x = np.asarray(x, dtype=np.float64)
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    return x * (cap / np.maximum(norms, cap))


@dataclass(frozen=True, eq=False)
class ReferenceClassifier:
    """Softmax classifier standing in for the model under study.

    Datasets carry the raw input as features. The model itself reads
    ``capped(x)``, and its probabilities cover every class of the task.
    """

    task: SyntheticTask
    model: LinearModel
    norm_cap: float

    def capped(self, x: Matrix) -> Matrix:
        return cap_norms(x, self.norm_cap)

    def dataset(
        self,
        name: str,
        x: Matrix,
        y: IndexVector | None = None,
        *,
        label_space: LabelSpace | None = None,
        grid: np.ndarray | None = None,
    ) -> Dataset:
        grid = to_grid(x) if grid is None else grid
        return Dataset(
            name=name,
            probabilities=predict_proba(self.model, self.capped(x)),
            prob_classes=self.task.label_space,
            labels=y,
            features=x,
            label_space=label_space,
            rotated_features=rotated_featurizations(grid),
        )


def train_reference_classifier(
    task: SyntheticTask,
    samples: TaskSamples,
    *,
    l2: float = 1e-3,
    shuffle_labels: bool = False,
) -> tuple[ReferenceClassifier, dict[str, Dataset]]:
    """Fit the reference classifier on the train split.

    Returns the classifier and one labeled Dataset per split, named
    ``base_train``, ``base_val`` and ``base_test``. ``shuffle_labels``
    permutes the training labels, which leaves a chance-level model.
    """
    y = samples.train.y
    if shuffle_labels:
        y = rng_for(task.seed, 3).permutation(y)
    norm_cap = float(np.median(np.linalg.norm(samples.train.x, axis=1)))
    model = fit_logistic(cap_norms(samples.train.x, norm_cap), y, l2, classes=task.label_space)
    reference = ReferenceClassifier(task=task, model=model, norm_cap=norm_cap)
    datasets = {
        split: reference.dataset(f"base_{split}", sample.x, sample.y)
        for split, sample in samples.items()
    }
    test_accuracy = accuracy(datasets["test"].view())
    logger.info("reference classifier test accuracy %.4f", test_accuracy)
    return reference, datasets
