from pathlib import Path

import pytest
from pydantic import ValidationError

from ggkp.config import Settings, reload_settings, settings


@pytest.mark.parametrize("value", ["", "   ", None])
def test_blank_output_dir_falls_back(value):
    assert Settings(output_dir=value).output_dir == Path("out")


def test_output_dir_becomes_path():
    assert Settings(output_dir="runs/today").output_dir == Path("runs/today")


def test_tolerance_must_lie_in_unit_interval():
    with pytest.raises(ValidationError):
        Settings(tol=2.0)


def test_reload_updates_shared_instance(monkeypatch):
    monkeypatch.setenv("GGKP_TOL", "1e-6")
    monkeypatch.setenv("GGKP_LOG_LEVEL", "debug")
    assert reload_settings() is settings
    assert settings.tol == 1e-6
    assert settings.log_level == "DEBUG"


def test_failed_reload_keeps_previous_values(monkeypatch):
    before = settings.tol
    monkeypatch.setenv("GGKP_TOL", "-1")
    with pytest.raises(ValidationError):
        reload_settings()
    assert settings.tol == before
