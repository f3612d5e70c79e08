"""Parameterized shift families over a synthetic task.

Intensity 0 reproduces the base generative process for every family.
Translation intensities are measured in units of the class-mean sphere radius,
so the same grid means the same relative shift whatever radius the task got.
``ShiftFamily.seed`` fixes the family's structure (translation direction,
order in which classes are removed); the ``seed`` passed to ``apply_shift``
drives sampling only.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from shiftscope.data import Dataset, LabelSpace
from shiftscope.exceptions import ConfigError, DataError
from shiftscope.workbench.task import (
    ReferenceClassifier,
    SyntheticTask,
    from_grid,
    rng_for,
    to_grid,
)

logger = logging.getLogger(__name__)


class ShiftKind(StrEnum):
    FEATURE_NOISE = "feature_noise"
    MEAN_TRANSLATION = "mean_translation"
    COVARIANCE_SCALE = "covariance_scale"
    LABEL_SUBSET = "label_subset"
    GRID_ROTATION_CONFOUND = "grid_rotation_confound"


_KIND_CODE = {kind: code for code, kind in enumerate(ShiftKind)}

DEFAULT_GRIDS: dict[ShiftKind, tuple[float, ...]] = {
    ShiftKind.FEATURE_NOISE: (0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0),
    ShiftKind.MEAN_TRANSLATION: (0.25, 0.5, 1.0, 1.5, 2.0),
    ShiftKind.COVARIANCE_SCALE: (0.25, 0.5, 1.0, 2.0, 3.0),
    ShiftKind.LABEL_SUBSET: (0.1, 0.2, 0.3, 0.5, 0.7),
    ShiftKind.GRID_ROTATION_CONFOUND: (0.1, 0.25, 0.5, 0.75, 1.0),
}


@dataclass(frozen=True, slots=True)
class ShiftFamily:
    kind: ShiftKind
    intensity_grid: tuple[float, ...]
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", ShiftKind(self.kind))
        grid = tuple(float(value) for value in self.intensity_grid)
        if not grid:
            raise ConfigError(f"{self.kind} needs at least one intensity")
        if any(value < 0 for value in grid):
            raise ConfigError("shift intensities must be non-negative", details={"grid": grid})
        if any(left >= right for left, right in zip(grid, grid[1:])):
            raise ConfigError("shift intensities must be increasing", details={"grid": grid})
        if self.kind is ShiftKind.GRID_ROTATION_CONFOUND and grid[-1] > 1:
            raise ConfigError("rotation probabilities must not exceed 1", details={"grid": grid})
        object.__setattr__(self, "intensity_grid", grid)

    @classmethod
    def default(cls, kind: ShiftKind | str, seed: int = 0) -> ShiftFamily:
        kind = ShiftKind(kind)
        return cls(kind, DEFAULT_GRIDS[kind], seed)

    def index_of(self, intensity: float) -> int:
        for index, value in enumerate(self.intensity_grid):
            if math.isclose(value, intensity, rel_tol=0.0, abs_tol=1e-12):
                return index
        raise ConfigError(
            f"intensity {intensity} is not in the {self.kind} grid",
            details={"grid": self.intensity_grid},
        )


def translation_direction(task: SyntheticTask, family: ShiftFamily) -> np.ndarray:
    direction = rng_for(family.seed, _KIND_CODE[family.kind], task.seed).standard_normal(task.d)
    return direction / np.linalg.norm(direction)


def removed_classes(task: SyntheticTask, family: ShiftFamily, intensity: float) -> LabelSpace:
    """The first ``ceil(intensity * k)`` classes of a fixed permutation."""
    count = math.ceil(intensity * task.k - 1e-12)
    if count >= task.k:
        raise DataError(
            "label_subset would remove every class",
            details={"intensity": intensity, "k": task.k},
        )
    order = rng_for(family.seed, _KIND_CODE[family.kind], task.seed).permutation(task.k)
    return LabelSpace.of(order[:count])


def apply_shift(
    task: SyntheticTask,
    reference: ReferenceClassifier,
    family: ShiftFamily,
    intensity: float,
    n: int,
    seed: int,
    *,
    name: str | None = None,
) -> Dataset:
    """Sample ``n`` labeled rows from the shifted process and run the classifier."""
    index = family.index_of(intensity)
    if n < 1:
        raise ConfigError("shifted sample needs at least one row")
    rng = rng_for(seed, _KIND_CODE[family.kind], index, task.seed)
    name = name or f"{family.kind}-{index:02d}"
    label_space = None
    grid = None

    match family.kind:
        case ShiftKind.FEATURE_NOISE:
            x, y = task.sample(n, rng)
            x = x + rng.standard_normal(x.shape) * intensity
        case ShiftKind.MEAN_TRANSLATION:
            offset = intensity * task.radius * translation_direction(task, family)
            x, y = task.sample(n, rng, means=task.class_means + offset)
        case ShiftKind.COVARIANCE_SCALE:
            x, y = task.sample(n, rng, cov_scale=task.class_cov_scale * (1.0 + intensity))
        case ShiftKind.LABEL_SUBSET:
            removed = removed_classes(task, family, intensity)
            kept = LabelSpace.of(set(task.label_space.ids) - set(removed.ids))
            x, y = task.sample(n, rng, classes=kept)
            if removed:
                label_space = kept
        case ShiftKind.GRID_ROTATION_CONFOUND:
            x, y = task.sample(n, rng)
            grid = to_grid(x)
            turns = np.where(rng.random(n) < intensity, rng.integers(1, 4, size=n), 0)
            for k in (1, 2, 3):
                rows = turns == k
                grid[rows] = np.rot90(grid[rows], k, axes=(1, 2))
            x = from_grid(grid, task.d)

    logger.debug("generated %s at intensity %s (%d rows)", name, intensity, n)
    return reference.dataset(name, x, y, label_space=label_space, grid=grid)
