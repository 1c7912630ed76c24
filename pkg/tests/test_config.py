import pytest

from coxeter_involutions.app import RunConfig
from coxeter_involutions.config import ConfigManager, load_overlay, parse_memory


def test_run_config_round_trip():
    config = RunConfig(cap=5000, memory_budget=2048, mode="exhaustive", threads=4, golden_file="g.txt")
    assert RunConfig.from_dict(config.to_dict()) == config
    clone = config.copy()
    clone.cap = 1
    assert config.cap == 5000


@pytest.mark.parametrize(
    "text, expected",
    [("1024", 1024), (2048, 2048), ("512M", 512 * 1024**2), ("8G", 8 * 1024**3), ("2GiB", 2 * 1024**3), ("64kb", 65536)],
)
def test_parse_memory(text, expected):
    assert parse_memory(text) == expected


def test_parse_memory_rejects_garbage():
    with pytest.raises(ValueError):
        parse_memory("lots")


def test_save_and_load(tmp_path):
    manager = ConfigManager(tmp_path / "nested" / "config.json")
    config = RunConfig(mode="neg_orbit", threads=3)
    manager.save(config)
    assert manager.load() == config


def test_missing_file_gives_defaults(tmp_path):
    assert ConfigManager(tmp_path / "absent.json").load() == RunConfig()


def test_corrupt_file_falls_back_to_defaults(tmp_path):
    path = tmp_path / "config.json"
    path.write_text("{not json", encoding="utf-8")
    assert ConfigManager(path).load() == RunConfig()
    path.write_text('{"cap": "many"}', encoding="utf-8")
    assert ConfigManager(path).load() == RunConfig()


def test_overlay_wins_over_the_stored_file(tmp_path):
    path = tmp_path / "config.json"
    overlay = tmp_path / "coxinv.toml"
    overlay.write_text('[run]\nmode = "exhaustive"\nmemory_budget = "1G"\n', encoding="utf-8")
    manager = ConfigManager(path, overlay)
    manager.save(RunConfig(mode="neg_orbit", threads=2))
    config = manager.load()
    assert config.mode == "exhaustive"
    assert config.memory_budget == 1024**3
    assert config.threads == 2
    assert manager.load(overlay=False).mode == "neg_orbit"


def test_unreadable_overlay_is_ignored(tmp_path):
    overlay = tmp_path / "coxinv.toml"
    overlay.write_text("[run\nmode =", encoding="utf-8")
    assert load_overlay(overlay) == {}
    assert load_overlay(tmp_path / "absent.toml") == {}
