from dataclasses import replace

import pytest

from shiftscope.io import GroupedDataset
from shiftscope.workbench import ShiftFamily, ShiftKind, apply_shift, gen_task, train_reference_classifier


@pytest.fixture(scope="session")
def universe():
    """Base plus four feature-noise and four mean-translation targets."""
    task, samples = gen_task(0, k=4, d=8, n=600)
    reference, splits = train_reference_classifier(task, samples)
    items = [GroupedDataset(replace(splits["test"], name="base"), "base")]
    for kind, group in (
        (ShiftKind.FEATURE_NOISE, "noise"),
        (ShiftKind.MEAN_TRANSLATION, "translation"),
    ):
        family = ShiftFamily.default(kind)
        for index, intensity in enumerate(family.intensity_grid[:4]):
            target = apply_shift(task, reference, family, intensity, 600, 0, name=f"{group}-{index}")
            items.append(GroupedDataset(target, group))
    return items
