"""Datasets of classifier outputs, label-space restriction, and accuracy.

A ``Dataset`` holds one distribution's sample as the classifier saw it:
optional per-instance features, output probabilities over declared class
columns, and optional labels. ``restrict`` narrows a dataset to an
intersected label space without copying or renormalizing; ``accuracy`` and
``accuracy_gap`` are computed over such views.

Accuracy gap sign: base minus target, so a model that degrades on the target
has a positive gap, and predicted target accuracy is ``base - gap``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from shiftscope.data.labels import LabelSpace
from shiftscope.exceptions import DataError, LabelSpaceError
from shiftscope.types import ClassId, IndexVector, Matrix, MatrixLike

ROW_SUM_TOLERANCE = 1e-5
ROTATIONS = 4


def _frozen(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class Dataset:
    """One named sample of classifier outputs.

    Attributes:
        name: Dataset name, unique within a manifest.
        probabilities: ``N x K`` output probabilities, rows sum to 1.
        prob_classes: Class ids of the ``K`` probability columns.
        labels: Length-``N`` true class ids, or ``None`` when unlabeled.
        features: ``N x D`` featurization, or ``None``.
        label_space: Classes this distribution covers; defaults to
            ``prob_classes``. Labels must lie in it.
        rotated_features: Four ``N_r x D_r`` featurizations of the inputs
            rotated by 0, 90, 180 and 270 degrees, or ``None``.
    """

    name: str
    probabilities: Matrix
    prob_classes: LabelSpace
    labels: IndexVector | None = None
    features: Matrix | None = None
    label_space: LabelSpace | None = None
    rotated_features: tuple[Matrix, ...] | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        probabilities = np.array(self.probabilities, dtype=np.float64, ndmin=2)
        if probabilities.ndim != 2 or probabilities.shape[0] < 1:
            raise DataError(
                f"dataset {self.name} needs at least one probability row",
                details={"shape": probabilities.shape},
            )
        n, k = probabilities.shape
        if k != len(self.prob_classes):
            raise DataError(
                f"dataset {self.name}: {k} probability columns for "
                f"{len(self.prob_classes)} classes",
            )
        if not np.all(np.isfinite(probabilities)) or np.any(probabilities < 0):
            raise DataError(
                f"dataset {self.name}: probabilities must be finite and non-negative"
            )
        sums = probabilities.sum(axis=1)
        worst = int(np.argmax(np.abs(sums - 1.0)))
        if abs(sums[worst] - 1.0) > ROW_SUM_TOLERANCE:
            raise DataError(
                f"dataset {self.name}: probability rows must sum to 1",
                details={"row": worst, "sum": float(sums[worst])},
            )
        object.__setattr__(self, "probabilities", _frozen(probabilities))

        label_space = self.label_space if self.label_space is not None else self.prob_classes
        object.__setattr__(self, "label_space", label_space)

        if self.labels is not None:
            labels = np.array(self.labels, dtype=np.int64).reshape(-1)
            if labels.shape[0] != n:
                raise DataError(
                    f"dataset {self.name}: row-count mismatch between labels and probabilities",
                    details={"labels": labels.shape[0], "probabilities": n},
                )
            unknown = np.setdiff1d(labels, label_space.as_array())
            if unknown.size:
                raise DataError(
                    f"dataset {self.name}: labels outside the declared label space",
                    details={"unknown": unknown.tolist()[:10]},
                )
            object.__setattr__(self, "labels", _frozen(labels))

        if self.features is not None:
            features = np.array(self.features, dtype=np.float64)
            if features.ndim == 1:
                features = features.reshape(-1, 1)
            if features.ndim != 2 or features.shape[0] != n:
                raise DataError(
                    f"dataset {self.name}: row-count mismatch between features and probabilities",
                    details={"features": features.shape, "probabilities": n},
                )
            object.__setattr__(self, "features", _frozen(features))

        if self.rotated_features is not None:
            rotated = tuple(
                _frozen(np.array(item, dtype=np.float64, ndmin=2))
                for item in self.rotated_features
            )
            if len(rotated) != ROTATIONS:
                raise DataError(
                    f"dataset {self.name}: expected {ROTATIONS} rotated featurizations"
                )
            if len({item.shape[1] for item in rotated}) != 1:
                raise DataError(
                    f"dataset {self.name}: rotated featurizations differ in width"
                )
            object.__setattr__(self, "rotated_features", rotated)

    @property
    def n(self) -> int:
        return int(self.probabilities.shape[0])

    @property
    def k(self) -> int:
        return int(self.probabilities.shape[1])

    @property
    def d(self) -> int | None:
        return None if self.features is None else int(self.features.shape[1])

    @property
    def is_labeled(self) -> bool:
        return self.labels is not None

    def without_labels(self) -> Dataset:
        return replace(self, labels=None)

    def with_probabilities(self, probabilities: MatrixLike) -> Dataset:
        return replace(self, probabilities=np.asarray(probabilities, dtype=np.float64))

    def view(self) -> DatasetView:
        """View of every row and every probability column."""
        return DatasetView(self, np.arange(self.n, dtype=np.int64), self.prob_classes)


@dataclass(frozen=True, eq=False)
class DatasetView:
    """Rows and probability columns of a dataset retained by a restriction."""

    source: Dataset
    row_index: IndexVector
    col_classes: LabelSpace

    def __post_init__(self) -> None:
        rows = _frozen(np.array(self.row_index, dtype=np.int64).reshape(-1))
        if np.any(np.diff(rows) <= 0):
            raise DataError("view row_index must be strictly increasing")
        object.__setattr__(self, "row_index", rows)

    @property
    def name(self) -> str:
        return self.source.name

    @property
    def n(self) -> int:
        return int(self.row_index.shape[0])

    @cached_property
    def columns(self) -> IndexVector:
        return self.source.prob_classes.positions(self.col_classes)

    @cached_property
    def probabilities(self) -> Matrix:
        """Retained rows and columns, not renormalized."""
        return self.source.probabilities[np.ix_(self.row_index, self.columns)]

    @property
    def labels(self) -> IndexVector | None:
        if self.source.labels is None:
            return None
        return self.source.labels[self.row_index]

    @property
    def features(self) -> Matrix | None:
        if self.source.features is None:
            return None
        return self.source.features[self.row_index]

    @property
    def rotated_features(self) -> tuple[Matrix, ...] | None:
        """Rotated featurizations of the retained rows.

        Rows are only selectable when each rotated matrix has one row per
        instance; otherwise the rotated sample is returned whole.
        """
        rotated = self.source.rotated_features
        if rotated is None:
            return None
        if all(item.shape[0] == self.source.n for item in rotated):
            return tuple(item[self.row_index] for item in rotated)
        return rotated


def intersect_labels(base: Dataset, target: Dataset) -> LabelSpace:
    """Sorted intersection of the two datasets' label spaces."""
    assert base.label_space is not None and target.label_space is not None
    shared = base.label_space.intersection(target.label_space)
    if not len(shared):
        raise LabelSpaceError(
            "disjoint label spaces",
            details={"base": base.name, "target": target.name},
            ref="label intersection",
        )
    return shared


def restrict(dataset: Dataset, label_space: LabelSpace) -> DatasetView:
    """Keep rows whose label is in ``label_space`` and only its columns.

    Unlabeled datasets keep every row. Probabilities are not renormalized.
    """
    if not label_space.issubset(dataset.prob_classes):
        raise LabelSpaceError(
            "unknown class in restriction",
            details={
                "dataset": dataset.name,
                "missing": sorted(set(label_space.ids) - set(dataset.prob_classes.ids)),
            },
        )
    if dataset.labels is None:
        rows = np.arange(dataset.n, dtype=np.int64)
    else:
        rows = np.flatnonzero(np.isin(dataset.labels, label_space.as_array()))
        if rows.size == 0:
            raise DataError(
                f"dataset {dataset.name} has no rows labeled inside the restriction",
                details={"classes": list(label_space.ids)},
            )
    return DatasetView(dataset, rows, label_space)


def predict_label(prob_row: MatrixLike, classes: LabelSpace) -> ClassId:
    """Class id at the maximal probability; ties go to the lowest id."""
    row = np.asarray(prob_row, dtype=np.float64).reshape(-1)
    if row.size == 0:
        raise DataError("cannot predict a label from an empty probability row")
    if row.size != len(classes):
        raise DataError(
            "probability row length does not match the class list",
            details={"row": row.size, "classes": len(classes)},
        )
    return classes.ids[int(np.argmax(row))]


def predict_labels(probabilities: Matrix, classes: LabelSpace) -> IndexVector:
    """Row-wise ``predict_label`` over a probability matrix."""
    # argmax returns the first maximum and ids are increasing.
    return classes.as_array()[np.argmax(probabilities, axis=1)]


def accuracy(view: DatasetView) -> float:
    """Fraction of retained rows whose predicted label equals the true one."""
    labels = view.labels
    if labels is None:
        raise DataError(
            f"labels required to compute accuracy of {view.name}",
            ref="accuracy",
        )
    if view.n == 0:
        raise DataError(f"cannot compute accuracy of an empty view of {view.name}")
    predicted = predict_labels(view.probabilities, view.col_classes)
    return float(np.mean(predicted == labels))


def accuracy_gap(base: Dataset, target: Dataset) -> float:
    """Base accuracy minus target accuracy over the intersected label space."""
    shared = intersect_labels(base, target)
    return accuracy(restrict(base, shared)) - accuracy(restrict(target, shared))
