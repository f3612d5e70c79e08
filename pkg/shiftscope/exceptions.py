"""Typed exception hierarchy for shiftscope errors."""

from __future__ import annotations


class ShiftScopeError(Exception):
    """Base exception for all shiftscope errors."""

    def __init__(
        self,
        message: str,
        *,
        details: dict | None = None,
        ref: str | None = None,
    ) -> None:
        """Initialize ShiftScopeError.

        Args:
            message: Human-readable error description.
            details: Optional structured data about the error.
            ref: Optional name of the definition being enforced
                (e.g. ``accuracy gap``, ``tensor header``).
        """
        super().__init__(message)
        self.message = message
        self.details = details or {}
        self.ref = ref


class LabelSpaceError(ShiftScopeError):
    """Label spaces are disjoint or a class is outside a declared space."""


class DataError(ShiftScopeError):
    """Dataset content violates an invariant or lacks a required modality."""


class TensorLoadError(DataError):
    """Tensor file cannot be decoded."""


class BadMagicError(TensorLoadError):
    """Tensor header does not start with the expected magic bytes."""


class UnknownDtypeError(TensorLoadError):
    """Tensor header declares an unsupported element type or rank."""


class TruncatedTensorError(TensorLoadError):
    """Tensor header or payload is shorter than declared."""


class ManifestError(DataError):
    """Manifest is malformed or references inconsistent tensors."""


class FitError(ShiftScopeError):
    """A model cannot be fitted to the given data."""


class ConfigError(ShiftScopeError):
    """Invalid settings or command-line configuration."""


class LeakageError(ConfigError):
    """Calibration and validation groups overlap."""
