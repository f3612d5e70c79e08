"""Ordered label spaces and their intersection."""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass

import numpy as np

from shiftscope.exceptions import LabelSpaceError
from shiftscope.types import ClassId, IndexVector


@dataclass(frozen=True, slots=True)
class LabelSpace:
    """Strictly increasing tuple of non-negative class ids."""

    ids: tuple[ClassId, ...]

    def __post_init__(self) -> None:
        ids = tuple(int(item) for item in self.ids)
        object.__setattr__(self, "ids", ids)
        if any(item < 0 for item in ids):
            raise LabelSpaceError("class ids must be non-negative", details={"ids": ids})
        if any(left >= right for left, right in zip(ids, ids[1:])):
            raise LabelSpaceError(
                "class ids must be strictly increasing", details={"ids": ids}
            )

    @classmethod
    def of(cls, ids: Iterable[int]) -> LabelSpace:
        """Build a label space from ids in any order, dropping duplicates."""
        return cls(tuple(sorted({int(item) for item in ids})))

    @classmethod
    def range(cls, k: int) -> LabelSpace:
        return cls(tuple(range(k)))

    def __len__(self) -> int:
        return len(self.ids)

    def __iter__(self) -> Iterator[ClassId]:
        return iter(self.ids)

    def __contains__(self, item: object) -> bool:
        return item in self.ids

    def intersection(self, other: LabelSpace) -> LabelSpace:
        return LabelSpace.of(set(self.ids) & set(other.ids))

    def issubset(self, other: LabelSpace) -> bool:
        return set(self.ids) <= set(other.ids)

    def positions(self, subset: LabelSpace) -> IndexVector:
        """Column positions of ``subset`` ids inside this space."""
        index = {item: position for position, item in enumerate(self.ids)}
        missing = [item for item in subset.ids if item not in index]
        if missing:
            raise LabelSpaceError(
                "unknown class in restriction", details={"missing": missing}
            )
        return np.asarray([index[item] for item in subset.ids], dtype=np.int64)

    def as_array(self) -> IndexVector:
        return np.asarray(self.ids, dtype=np.int64)
