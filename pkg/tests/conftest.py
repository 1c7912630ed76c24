from __future__ import annotations

import pytest

from coxeter_involutions.rootsys import RootSystem, build


@pytest.fixture(scope="module")
def system():
    """Root systems by type string; ``build`` caches, so each type is closed once."""

    def get(type_text: str) -> RootSystem:
        return build(type_text)

    return get


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    monkeypatch.setattr("coxeter_involutions.config.DEFAULT_CONFIG_PATH", tmp_path / "config.json")
    monkeypatch.setattr("coxeter_involutions.config.DEFAULT_OVERLAY_FILE", tmp_path / "coxinv.toml")
