import numpy as np
import pytest

from shiftscope.data import (
    Dataset,
    LabelSpace,
    accuracy,
    accuracy_gap,
    intersect_labels,
    predict_label,
    restrict,
)
from shiftscope.exceptions import DataError, LabelSpaceError


def make_dataset(name, probabilities, labels=None, classes=None, **kwargs):
    probabilities = np.asarray(probabilities, dtype=np.float64)
    classes = classes or LabelSpace.range(probabilities.shape[1])
    return Dataset(name, probabilities, classes, labels=labels, **kwargs)


def test_label_space_of_sorts_and_dedupes():
    space = LabelSpace.of([3, 1, 3, 0])
    assert space.ids == (0, 1, 3)
    assert len(space) == 3
    assert 3 in space


@pytest.mark.parametrize("ids", [(1, 0), (0, 0), (-1, 2)])
def test_label_space_rejects_bad_ids(ids):
    with pytest.raises(LabelSpaceError):
        LabelSpace(ids)


def test_label_space_intersection_and_positions():
    left = LabelSpace((0, 1, 2, 5))
    right = LabelSpace((1, 5, 7))
    shared = left.intersection(right)
    assert shared.ids == (1, 5)
    assert shared.issubset(left)
    assert left.positions(shared).tolist() == [1, 3]
    with pytest.raises(LabelSpaceError, match="unknown class"):
        right.positions(LabelSpace((0,)))


def test_dataset_rejects_rows_not_summing_to_one():
    with pytest.raises(DataError, match="sum to 1"):
        make_dataset("bad", [[0.5, 0.6]])


def test_dataset_accepts_rows_within_tolerance():
    dataset = make_dataset("ok", [[0.5, 0.500001]])
    assert dataset.n == 1
    assert dataset.k == 2


def test_dataset_rejects_label_row_mismatch():
    with pytest.raises(DataError, match="row-count mismatch"):
        make_dataset("bad", [[1.0, 0.0], [0.0, 1.0]], labels=[0])


def test_dataset_rejects_labels_outside_label_space():
    with pytest.raises(DataError, match="outside the declared label space"):
        make_dataset("bad", [[1.0, 0.0]], labels=[1], label_space=LabelSpace((0,)))


def test_dataset_rejects_negative_probabilities():
    with pytest.raises(DataError, match="non-negative"):
        make_dataset("bad", [[1.5, -0.5]])


def test_dataset_arrays_are_read_only():
    dataset = make_dataset("ro", [[0.3, 0.7]], labels=[1])
    with pytest.raises(ValueError):
        dataset.probabilities[0, 0] = 1.0


def test_without_labels():
    dataset = make_dataset("labeled", [[0.3, 0.7]], labels=[1])
    assert dataset.is_labeled
    stripped = dataset.without_labels()
    assert not stripped.is_labeled
    assert stripped.name == "labeled"


def test_predict_label_ties_go_to_lowest_id():
    classes = LabelSpace((2, 4, 9))
    assert predict_label([0.4, 0.4, 0.2], classes) == 2
    assert predict_label([0.1, 0.45, 0.45], classes) == 4


def test_predict_label_errors():
    with pytest.raises(DataError, match="empty"):
        predict_label([], LabelSpace((0,)))
    with pytest.raises(DataError, match="does not match"):
        predict_label([0.5, 0.5], LabelSpace((0, 1, 2)))


def test_intersect_labels_disjoint_raises():
    base = make_dataset("b", [[1.0, 0.0]], classes=LabelSpace((0, 1)))
    target = make_dataset("t", [[1.0, 0.0]], classes=LabelSpace((2, 3)))
    with pytest.raises(LabelSpaceError, match="disjoint"):
        intersect_labels(base, target)


def test_restrict_keeps_labeled_rows_and_columns_without_renormalizing():
    dataset = make_dataset(
        "d",
        [[0.6, 0.3, 0.1], [0.2, 0.2, 0.6], [0.1, 0.8, 0.1]],
        labels=[0, 2, 1],
    )
    view = restrict(dataset, LabelSpace((0, 1)))
    assert view.row_index.tolist() == [0, 2]
    assert view.labels.tolist() == [0, 1]
    np.testing.assert_allclose(view.probabilities, [[0.6, 0.3], [0.1, 0.8]])
    assert view.probabilities.sum(axis=1).tolist() != [1.0, 1.0]


def test_restrict_unlabeled_keeps_every_row():
    dataset = make_dataset("u", [[0.6, 0.4], [0.3, 0.7]])
    view = restrict(dataset, LabelSpace((1,)))
    assert view.n == 2
    assert view.labels is None


def test_restrict_with_no_rows_left():
    dataset = make_dataset("d", [[0.6, 0.4]], labels=[0])
    with pytest.raises(DataError, match="no rows"):
        restrict(dataset, LabelSpace((1,)))


def test_accuracy_requires_labels():
    dataset = make_dataset("u", [[0.6, 0.4]])
    with pytest.raises(DataError, match="labels required"):
        accuracy(dataset.view())


def test_accuracy_counts_argmax_matches():
    dataset = make_dataset(
        "d",
        [[0.9, 0.1], [0.2, 0.8], [0.7, 0.3], [0.4, 0.6]],
        labels=[0, 1, 1, 1],
    )
    assert accuracy(dataset.view()) == 0.75


def test_accuracy_gap_is_zero_for_identical_datasets():
    dataset = make_dataset("d", [[0.9, 0.1], [0.2, 0.8]], labels=[0, 0])
    assert accuracy_gap(dataset, dataset) == 0.0


def test_accuracy_gap_over_intersection():
    base = make_dataset(
        "base",
        [[0.8, 0.1, 0.1], [0.1, 0.8, 0.1], [0.1, 0.1, 0.8]],
        labels=[0, 1, 2],
    )
    # the target never sees class 2, and its label space says so
    target = make_dataset(
        "target",
        [[0.8, 0.1, 0.1], [0.7, 0.2, 0.1]],
        labels=[0, 1],
        label_space=LabelSpace((0, 1)),
    )
    assert intersect_labels(base, target).ids == (0, 1)
    assert accuracy_gap(base, target) == pytest.approx(0.5)


def test_rotated_features_need_four_views():
    with pytest.raises(DataError, match="4 rotated"):
        make_dataset("r", [[1.0, 0.0]], rotated_features=(np.zeros((1, 2)),) * 3)
