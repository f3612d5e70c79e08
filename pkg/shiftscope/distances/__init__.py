"""Featurization distances: Frechet, MMD, discriminators, rotation classifiers."""

from shiftscope.distances.auc import macro_ovr_auc, roc_auc
from shiftscope.distances.discriminator import (
    DiscriminatorReport,
    a_proxy,
    discriminative_distance,
)
from shiftscope.distances.gaussian import (
    GaussianSummary,
    frechet,
    frechet_from_summaries,
    gaussian_summary,
    matrix_sqrt_psd,
)
from shiftscope.distances.mmd import mmd
from shiftscope.distances.rotation import (
    RotationClassifier,
    RotationReport,
    fit_rotation_classifier,
    rotation_score,
    score_rotation,
)

__all__ = [
    "DiscriminatorReport",
    "GaussianSummary",
    "RotationClassifier",
    "RotationReport",
    "a_proxy",
    "discriminative_distance",
    "fit_rotation_classifier",
    "frechet",
    "frechet_from_summaries",
    "gaussian_summary",
    "macro_ovr_auc",
    "matrix_sqrt_psd",
    "mmd",
    "roc_auc",
    "rotation_score",
    "score_rotation",
]
