"""Settings for measurement, fitting, and the synthetic workbench.

Holds every tunable default in one place: discriminator and rotation
learners, the MLP regressor, temperature search, split fractions, and the
global seed. ``Settings.merge`` returns a new config with per-call overrides
without mutating the base; ``load_settings`` reads the same fields from TOML.
"""

from __future__ import annotations

import tomllib
from dataclasses import dataclass, field, fields, is_dataclass, replace
from pathlib import Path
from typing import Any, Literal

from shiftscope.exceptions import ConfigError
from shiftscope.io.splits import SplitSpec

RegressorKind = Literal["linear", "mlp"]


@dataclass(frozen=True, slots=True)
class MlpConfig:
    """Hyperparameters of the MLP regressor.

    Attributes:
        hidden: Hidden layer widths; the output layer has one unit.
        learning_rate: SGD step size.
        weight_decay: L2 penalty added to the gradient of every weight.
        momentum: Heavy-ball momentum coefficient.
        max_iter: Iteration cap.
        patience: Stop when training MSE improved by less than
            ``min_improvement`` over this many iterations.
        min_improvement: Improvement threshold for early stopping.
        batch_size: Mini-batch size; full batch when there are fewer rows.
        seed: Seed for initialization and batch order.
    """

    hidden: tuple[int, ...] = (512, 256, 128)
    learning_rate: float = 1e-4
    weight_decay: float = 1e-3
    momentum: float = 0.9
    max_iter: int = 20_000
    patience: int = 500
    min_improvement: float = 1e-9
    batch_size: int = 64
    seed: int = 0

    def __post_init__(self) -> None:
        if any(width < 1 for width in self.hidden):
            raise ConfigError("MLP hidden widths must be positive")
        if self.learning_rate <= 0 or self.max_iter < 1 or self.batch_size < 1:
            raise ConfigError("MLP learning rate, max_iter and batch_size must be positive")
        if not 0 <= self.momentum < 1:
            raise ConfigError("MLP momentum must be in [0, 1)")


@dataclass(frozen=True, slots=True)
class DiscriminatorConfig:
    l2_grid: tuple[float, ...] = (1e-4, 1e-3, 1e-2, 1e-1)
    max_iter: int = 5_000
    tol: float = 1e-6
    standardize: bool = True
    kind: Literal["linear", "mlp"] = "linear"
    mlp: MlpConfig = field(default_factory=lambda: MlpConfig(hidden=(64, 32)))

    def __post_init__(self) -> None:
        if not self.l2_grid or any(value < 0 for value in self.l2_grid):
            raise ConfigError("discriminator l2_grid must be non-empty and non-negative")
        if self.kind not in {"linear", "mlp"}:
            raise ConfigError(f"unknown discriminator kind: {self.kind}")


@dataclass(frozen=True, slots=True)
class RotationConfig:
    l2: float = 1e-3
    max_iter: int = 2_000
    tol: float = 1e-6
    standardize: bool = True


@dataclass(frozen=True, slots=True)
class TemperatureConfig:
    lower: float = 0.05
    upper: float = 20.0
    grid_points: int = 41
    tol: float = 1e-4
    floor: float = 1e-12

    def __post_init__(self) -> None:
        if not 0 < self.lower < 1 < self.upper:
            raise ConfigError("temperature search interval must bracket 1")
        if self.grid_points < 3:
            raise ConfigError("temperature grid needs at least 3 points")


_NESTED = {
    "split": SplitSpec,
    "discriminator": DiscriminatorConfig,
    "rotation": RotationConfig,
    "mlp": MlpConfig,
    "temperature": TemperatureConfig,
}


@dataclass(frozen=True)
class Settings:
    """Defaults used by measurement, fitting, and the workbench.

    Attributes:
        seed: Global seed; every random stream derives from it.
        regressor: Gap regressor kind for regressor methods.
        ridge: Ridge strength for the linear regressor (0 = plain OLS).
        combined_features: Methods whose scalars feed one extra
            multi-feature ``combined`` predictor; empty disables it.
        split: Discriminator split fractions.
        discriminator: Base-vs-target discriminator settings.
        rotation: Rotation-prediction classifier settings.
        mlp: MLP regressor hyperparameters.
        temperature: Temperature-scaling search settings.
        ece_bins: Bin count for the calibration-error diagnostic.
    """

    seed: int = 0
    regressor: RegressorKind = "linear"
    ridge: float = 0.0
    combined_features: tuple[str, ...] = ()
    split: SplitSpec = field(default_factory=SplitSpec)
    discriminator: DiscriminatorConfig = field(default_factory=DiscriminatorConfig)
    rotation: RotationConfig = field(default_factory=RotationConfig)
    mlp: MlpConfig = field(default_factory=MlpConfig)
    temperature: TemperatureConfig = field(default_factory=TemperatureConfig)
    ece_bins: int = 15

    def __post_init__(self) -> None:
        if self.regressor not in {"linear", "mlp"}:
            raise ConfigError(f"unknown regressor kind: {self.regressor}")
        if self.ridge < 0:
            raise ConfigError("ridge must be non-negative")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        if self.ece_bins < 1:
            raise ConfigError("ece_bins must be positive")

    @property
    def split_spec(self) -> SplitSpec:
        """Discriminator split fractions seeded from the global seed."""
        return self.split.with_seed(self.seed)

    def merge(
        self, overrides: dict[str, Any] | Settings | None = None, **kwargs: Any
    ) -> Settings:
        """Merge overrides into these settings and return a new ``Settings``.

        Nested configs accept either a replacement instance or a mapping of
        field overrides. ``None`` values are ignored so that
        ``merge(seed=None)`` keeps the current seed.
        """
        if overrides is None:
            overrides = {}
        if isinstance(overrides, Settings):
            overrides = {f.name: getattr(overrides, f.name) for f in fields(Settings)}
        else:
            overrides = dict(overrides)
        overrides.update(kwargs)

        unknown = set(overrides) - {f.name for f in fields(Settings)}
        if unknown:
            raise ConfigError(f"unknown settings: {', '.join(sorted(unknown))}")

        merged: dict[str, Any] = {}
        for f in fields(Settings):
            old = getattr(self, f.name)
            new = overrides.get(f.name)
            if new is None:
                merged[f.name] = old
            elif f.name in _NESTED and isinstance(new, dict):
                merged[f.name] = _replace_nested(f.name, old, new)
            else:
                merged[f.name] = new
        return Settings(**merged)


def load_settings(path: str | Path) -> Settings:
    """Read settings from a TOML file; nested configs are TOML tables."""
    try:
        data = tomllib.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot read settings file: {exc}") from exc
    if "combined_features" in data:
        data["combined_features"] = tuple(str(item) for item in data["combined_features"])
    return Settings().merge(data)


def _replace_nested(name: str, current: Any, values: dict[str, Any]) -> Any:
    assert is_dataclass(current)
    allowed = {f.name for f in fields(current)}
    unknown = set(values) - allowed
    if unknown:
        raise ConfigError(f"unknown {name} settings: {', '.join(sorted(unknown))}")
    coerced: dict[str, Any] = {}
    for key, value in values.items():
        if key == "mlp" and isinstance(value, dict):
            value = _replace_nested("mlp", getattr(current, "mlp"), value)
        elif isinstance(value, list):
            value = tuple(value)
        coerced[key] = value
    try:
        return replace(current, **coerced)
    except TypeError as exc:
        raise ConfigError(f"invalid {name} settings: {exc}") from exc
