"""Deterministic 40/10/50 splits for discriminator training.

Splits come from one seeded uniform permutation drawn with numpy's PCG64
bit generator (``numpy.random.Generator(PCG64(seed)).permutation``), cut at
``floor(train * n)`` and ``floor((train + tune) * n)``. The same seed and
``n`` always give the same three index lists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from shiftscope.exceptions import ConfigError, DataError
from shiftscope.types import IndexVector

MIN_SPLIT_SIZE = 10


@dataclass(frozen=True, slots=True)
class SplitSpec:
    train: float = 0.40
    tune: float = 0.10
    test: float = 0.50
    seed: int = 0

    def __post_init__(self) -> None:
        if min(self.train, self.tune, self.test) <= 0:
            raise ConfigError("split fractions must be positive")
        if not math.isclose(self.train + self.tune + self.test, 1.0, abs_tol=1e-9):
            raise ConfigError("split fractions must sum to 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("split seed must be an unsigned 64-bit integer")

    @property
    def fractions(self) -> tuple[float, float, float]:
        return self.train, self.tune, self.test

    def with_seed(self, seed: int) -> SplitSpec:
        return SplitSpec(self.train, self.tune, self.test, seed % 2**64)


def make_splits(
    n: int, spec: SplitSpec | None = None
) -> tuple[IndexVector, IndexVector, IndexVector]:
    """Partition ``range(n)`` into disjoint train/tune/test index arrays."""
    spec = spec or SplitSpec()
    if n < MIN_SPLIT_SIZE:
        raise DataError(
            "too few instances to split",
            details={"n": n, "minimum": MIN_SPLIT_SIZE},
        )
    permutation = np.random.Generator(np.random.PCG64(spec.seed)).permutation(n)
    first = math.floor(spec.train * n + 1e-9)
    second = math.floor((spec.train + spec.tune) * n + 1e-9)
    return (
        permutation[:first].astype(np.int64),
        permutation[first:second].astype(np.int64),
        permutation[second:].astype(np.int64),
    )
