"""Configuration persistence for coxinv runs."""

from __future__ import annotations

import json
import logging
import re
import threading
from pathlib import Path
from typing import Any, Optional

try:  # Python 3.11+
    import tomllib  # type: ignore
except ModuleNotFoundError:  # pragma: no cover - fallback for older versions
    import tomli as tomllib  # type: ignore

from .app import RunConfig


LOGGER = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path.home() / ".coxeter_involutions" / "config.json"
DEFAULT_OVERLAY_FILE = Path.cwd() / "coxinv.toml"

_MEMORY_PATTERN = re.compile(r"^\s*(\d+)\s*([kmgt]?)(?:i?b)?\s*$", re.IGNORECASE)
_MEMORY_UNITS = {"": 1, "k": 1024, "m": 1024**2, "g": 1024**3, "t": 1024**4}


def parse_memory(text: str | int) -> int:
    """Byte count from ``1024``, ``512M``, ``8G`` or ``2GiB``."""

    if isinstance(text, int):
        return text
    match = _MEMORY_PATTERN.match(str(text))
    if match is None:
        raise ValueError(f"Cannot parse memory size '{text}'. Use a byte count or a K/M/G/T suffix.")
    return int(match.group(1)) * _MEMORY_UNITS[match.group(2).lower()]


def load_overlay(path: Path | None = None) -> dict[str, Any]:
    """The ``[run]`` table of the optional TOML overlay, or ``{}``."""

    file_path = path or DEFAULT_OVERLAY_FILE
    if not file_path.exists():
        return {}

    try:
        data = tomllib.loads(file_path.read_text(encoding="utf-8"))
    except (tomllib.TOMLDecodeError, OSError) as exc:
        LOGGER.warning("Ignoring unreadable overlay %s: %s", file_path, exc)
        return {}

    table = data.get("run")
    if not isinstance(table, dict):
        return {}
    overlay = dict(table)
    if "memory_budget" in overlay:
        overlay["memory_budget"] = parse_memory(overlay["memory_budget"])
    return overlay


class ConfigManager:
    """Load and store run configuration on disk."""

    def __init__(self, path: Optional[Path] = None, overlay_path: Optional[Path] = None) -> None:
        self.path = path or DEFAULT_CONFIG_PATH
        self.overlay_path = overlay_path
        self._lock = threading.Lock()

    def _read(self) -> dict[str, Any]:
        with self._lock:
            if not self.path.exists():
                return {}

            try:
                data = json.loads(self.path.read_text(encoding="utf-8"))
            except (json.JSONDecodeError, OSError):
                LOGGER.warning("Config file %s is unreadable; using defaults", self.path)
                return {}

        return data if isinstance(data, dict) else {}

    def load(self, *, overlay: bool = True) -> RunConfig:
        data = self._read()
        if overlay:
            data.update(load_overlay(self.overlay_path))
        try:
            return RunConfig.from_dict(data)
        except (TypeError, ValueError):
            LOGGER.warning("Config values in %s are invalid; using defaults", self.path)
            return RunConfig()

    def save(self, config: RunConfig) -> None:
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            payload = json.dumps(config.to_dict(), indent=2, sort_keys=True)
            self.path.write_text(payload, encoding="utf-8")


__all__ = ["ConfigManager", "DEFAULT_CONFIG_PATH", "DEFAULT_OVERLAY_FILE", "load_overlay", "parse_memory"]
