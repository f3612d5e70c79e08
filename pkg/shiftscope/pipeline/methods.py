"""Accuracy-prediction methods and what each one needs."""

from __future__ import annotations

from enum import StrEnum

from shiftscope.exceptions import ConfigError


class Method(StrEnum):
    BASE_ACC = "base_acc"
    AC = "ac"
    AC_TEMPSCALING = "ac_tempscaling"
    DOC_FEAT = "doc_feat"
    FRECHET = "frechet"
    DISC_A_PROXY = "disc_a_proxy"
    DISC_AUC = "disc_auc"
    MMD = "mmd"
    ROTATION = "rotation"
    DOE = "doe"
    DOC = "doc"


class Modality(StrEnum):
    PROBABILITIES = "probabilities"
    FEATURES = "features"
    ROTATED_FEATURES = "rotated features"


ALL_METHODS: tuple[Method, ...] = tuple(Method)

#: Methods that estimate target accuracy directly, without a gap regressor.
REGRESSOR_FREE = frozenset({Method.BASE_ACC, Method.AC, Method.AC_TEMPSCALING, Method.DOC_FEAT})

#: Name of the multi-feature predictor built from ``Settings.combined_features``.
COMBINED = "combined"

REQUIRES: dict[Method, Modality] = {
    Method.FRECHET: Modality.FEATURES,
    Method.MMD: Modality.FEATURES,
    Method.DISC_A_PROXY: Modality.FEATURES,
    Method.DISC_AUC: Modality.FEATURES,
    Method.ROTATION: Modality.ROTATED_FEATURES,
}

#: Measurement feature read by each method; ``None`` for base accuracy.
FEATURE_KEY: dict[Method, str | None] = {
    Method.BASE_ACC: None,
    Method.AC: "ac",
    Method.AC_TEMPSCALING: "ac_tempscaling",
    Method.DOC_FEAT: "doc",
    Method.FRECHET: "frechet",
    Method.DISC_A_PROXY: "disc_a_proxy",
    Method.DISC_AUC: "disc_auc",
    Method.MMD: "mmd",
    Method.ROTATION: "rotation",
    Method.DOE: "doe",
    Method.DOC: "doc",
}


def parse_methods(names: str | list[str] | tuple[str, ...]) -> tuple[Method, ...]:
    """Parse a comma-separated list (or ``all``) into known methods, in order."""
    if isinstance(names, str):
        names = [item.strip() for item in names.split(",") if item.strip()]
    if list(names) == ["all"]:
        return ALL_METHODS
    parsed: list[Method] = []
    for name in names:
        try:
            method = Method(name)
        except ValueError:
            raise ConfigError(
                f"unknown method: {name}",
                details={"known": [m.value for m in ALL_METHODS]},
            ) from None
        if method not in parsed:
            parsed.append(method)
    return tuple(parsed)


def requires_regressor(method: Method | str) -> bool:
    return method == COMBINED or Method(method) not in REGRESSOR_FREE
