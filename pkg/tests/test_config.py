import logging

import pytest

from src.config import DEFAULT_CHECKPOINT_INTERVAL, get_config


def test_defaults(tmp_path):
    cfg = get_config()
    assert cfg.THREADS == 1
    assert cfg.OUT_ROOT == str(tmp_path / "out")
    assert cfg.log_level == logging.INFO
    assert cfg.ORACLE_MAX_DEGREE == 16
    assert cfg.CHECKPOINT_INTERVAL == DEFAULT_CHECKPOINT_INTERVAL == 30.0


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("MEXT_THREADS", "4")
    monkeypatch.setenv("MEXT_LOG_LEVEL", "debug")
    monkeypatch.setenv("MEXT_CHECKPOINT_INTERVAL", "2.5")
    cfg = get_config()
    assert cfg.THREADS == 4
    assert cfg.log_level == logging.DEBUG
    assert cfg.CHECKPOINT_INTERVAL == 2.5


@pytest.mark.parametrize("key, value", [
    ("MEXT_THREADS", "many"),
    ("MEXT_THREADS", "0"),
    ("MEXT_LOG_LEVEL", "loud"),
    ("MEXT_ORACLE_MAX_DEGREE", "-1"),
    ("MEXT_CHECKPOINT_INTERVAL", "-5"),
])
def test_invalid_values(monkeypatch, key, value):
    monkeypatch.setenv(key, value)
    with pytest.raises(ValueError):
        get_config()
