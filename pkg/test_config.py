# test_config.py
import importlib

import config
from config import Config, PaperReproConfig, QuickConfig


def test_unknown_truncation_preset_falls_back_to_default():
    assert Config.get_truncation_preset("nope") == Config.TRUNCATION_PRESETS["default"]
    assert Config.get_truncation_preset("paper-repro")["n_cap"] == 100


def test_sample_sizes_and_fluctuation_defaults():
    assert Config.get_sample_size("ci") == 100_000
    assert Config.get_sample_size("paper-repro") == 1_000_000
    assert Config.get_sample_size("unknown") == 100_000
    assert Config.get_fluctuation_config("rational")["p_exponent"] == 5.5
    assert Config.get_fluctuation_config("irrational")["R_max"] == 7.0


def test_feature_flags():
    assert Config.is_feature_enabled("quadrature_fallback")
    assert not Config.is_feature_enabled("does_not_exist")
    # every flag is read by some module
    assert set(Config.FEATURES) == {"quadrature_fallback", "limit_branch", "tail_certificates", "rich_console"}


def test_get_config_reads_environment(monkeypatch):
    monkeypatch.setenv("WEYL_LAB_ENV", "paper-repro")
    assert config.get_config().__name__ == PaperReproConfig.__name__
    monkeypatch.setenv("WEYL_LAB_ENV", "quick")
    assert config.get_config().__name__ == QuickConfig.__name__
    assert PaperReproConfig.DEFAULT_TRUNCATION == "paper-repro"


def test_output_dir_env_override(monkeypatch):
    monkeypatch.setenv("WEYL_LAB_OUTPUT_DIR", "elsewhere")
    reloaded = importlib.reload(config)
    try:
        assert reloaded.Config.OUTPUT_DIR == "elsewhere"
    finally:
        monkeypatch.delenv("WEYL_LAB_OUTPUT_DIR")
        importlib.reload(config)


def test_ensure_directories(tmp_path):
    base = tmp_path / "out"
    Config.ensure_directories(str(base))
    assert (base / Config.REPORTS_DIR).is_dir()
