"""Gaussian summaries and the Frechet distance between featurizations.

The trace term uses ``sqrt(S_B^1/2 S_T S_B^1/2)``, which has the same trace
as ``sqrt(S_B S_T)`` but is symmetric, so a symmetric eigendecomposition
applies. Eigenvalues below zero from roundoff are clamped at zero, and so is
a negative total.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from shiftscope.exceptions import DataError
from shiftscope.types import Matrix, Vector

SYMMETRY_TOLERANCE = 1e-6


@dataclass(frozen=True, eq=False)
class GaussianSummary:
    mean: Vector
    cov: Matrix
    n: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise DataError("need at least two samples for a Gaussian summary")
        if not np.allclose(self.cov, self.cov.T, atol=1e-9, rtol=0.0):
            raise DataError("covariance must be symmetric")

    @property
    def d(self) -> int:
        return int(self.mean.shape[0])


def gaussian_summary(features: Matrix) -> GaussianSummary:
    """Column means and unbiased (n - 1) covariance of a feature matrix."""
    x = _as_features(features)
    n = x.shape[0]
    if n < 2:
        raise DataError("need at least two samples", details={"n": n})
    mean = x.mean(axis=0)
    centered = x - mean
    cov = centered.T @ centered / (n - 1)
    return GaussianSummary(mean=mean, cov=(cov + cov.T) / 2.0, n=n)


def matrix_sqrt_psd(matrix: Matrix) -> Matrix:
    """Symmetric square root of a positive semi-definite matrix."""
    a = np.asarray(matrix, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DataError("matrix square root needs a square matrix")
    if np.max(np.abs(a - a.T), initial=0.0) > SYMMETRY_TOLERANCE:
        raise DataError("matrix square root needs a symmetric matrix")
    eigenvalues, eigenvectors = eigh((a + a.T) / 2.0)
    root = np.sqrt(np.clip(eigenvalues, 0.0, None))
    return (eigenvectors * root) @ eigenvectors.T


def frechet_from_summaries(base: GaussianSummary, target: GaussianSummary) -> float:
    if base.d != target.d:
        raise DataError(
            "feature dimension mismatch", details={"base": base.d, "target": target.d}
        )
    mean_term = float(np.sum((base.mean - target.mean) ** 2))
    base_root = matrix_sqrt_psd(base.cov)
    product = base_root @ target.cov @ base_root
    eigenvalues = eigh((product + product.T) / 2.0, eigvals_only=True)
    cross_trace = float(np.sum(np.sqrt(np.clip(eigenvalues, 0.0, None))))
    trace_term = float(np.trace(base.cov) + np.trace(target.cov)) - 2.0 * cross_trace
    return max(0.0, mean_term + trace_term)


def frechet(base_features: Matrix, target_features: Matrix) -> float:
    """Frechet distance between Gaussian fits of two entire feature sets."""
    return frechet_from_summaries(
        gaussian_summary(base_features), gaussian_summary(target_features)
    )


def _as_features(features: Matrix) -> Matrix:
    x = np.asarray(features, dtype=np.float64)
    if x.ndim == 1:
        x = x.reshape(-1, 1)
    if x.ndim != 2 or x.shape[1] < 1:
        raise DataError("features must be an N x D matrix with D >= 1")
    if not np.all(np.isfinite(x)):
        raise DataError("features must be finite")
    return x
