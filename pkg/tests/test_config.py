from dataclasses import is_dataclass

import pytest

from shiftscope.config import (
    DiscriminatorConfig,
    MlpConfig,
    Settings,
    TemperatureConfig,
    load_settings,
)
from shiftscope.exceptions import ConfigError
from shiftscope.io.splits import SplitSpec


def test_settings_defaults():
    cfg = Settings()
    assert cfg.seed == 0
    assert cfg.regressor == "linear"
    assert cfg.ridge == 0.0
    assert cfg.combined_features == ()
    assert cfg.split == SplitSpec()
    assert cfg.discriminator.standardize is True
    assert cfg.mlp.hidden == (512, 256, 128)
    assert cfg.mlp.learning_rate == 1e-4
    assert cfg.mlp.weight_decay == 1e-3
    assert cfg.mlp.momentum == 0.9
    assert cfg.mlp.max_iter == 20_000
    assert cfg.ece_bins == 15


def test_settings_is_dataclass():
    assert is_dataclass(Settings)


def test_split_spec_follows_global_seed():
    cfg = Settings(seed=7)
    assert cfg.split_spec.seed == 7
    assert cfg.split_spec.fractions == (0.40, 0.10, 0.50)


def test_merge_returns_new_settings():
    base = Settings()
    merged = base.merge(seed=3, regressor="mlp")
    assert merged.seed == 3
    assert merged.regressor == "mlp"
    assert base.seed == 0


def test_merge_ignores_none():
    cfg = Settings(seed=5).merge(seed=None, regressor=None)
    assert cfg.seed == 5
    assert cfg.regressor == "linear"


def test_merge_nested_mapping():
    cfg = Settings().merge({"mlp": {"hidden": (8,), "max_iter": 10}})
    assert cfg.mlp.hidden == (8,)
    assert cfg.mlp.max_iter == 10
    assert cfg.mlp.momentum == 0.9


def test_merge_rejects_unknown_fields():
    with pytest.raises(ConfigError, match="unknown settings"):
        Settings().merge(colour="blue")
    with pytest.raises(ConfigError, match="unknown mlp settings"):
        Settings().merge({"mlp": {"depth": 3}})


@pytest.mark.parametrize(
    "kwargs",
    [
        {"regressor": "forest"},
        {"ridge": -1.0},
        {"seed": -1},
        {"ece_bins": 0},
    ],
)
def test_settings_validation(kwargs):
    with pytest.raises(ConfigError):
        Settings(**kwargs)


def test_nested_config_validation():
    with pytest.raises(ConfigError):
        MlpConfig(hidden=(0,))
    with pytest.raises(ConfigError):
        MlpConfig(momentum=1.0)
    with pytest.raises(ConfigError):
        DiscriminatorConfig(l2_grid=())
    with pytest.raises(ConfigError):
        TemperatureConfig(lower=2.0)


def test_load_settings_from_toml(tmp_path):
    path = tmp_path / "settings.toml"
    path.write_text(
        'seed = 4\nregressor = "mlp"\ncombined_features = ["doc", "frechet"]\n'
        "\n[mlp]\nmax_iter = 50\n\n[split]\ntrain = 0.5\ntune = 0.1\ntest = 0.4\n",
        encoding="utf-8",
    )
    cfg = load_settings(path)
    assert cfg.seed == 4
    assert cfg.regressor == "mlp"
    assert cfg.combined_features == ("doc", "frechet")
    assert cfg.mlp.max_iter == 50
    assert cfg.split.train == 0.5


def test_load_settings_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read settings file"):
        load_settings(tmp_path / "missing.toml")
