"""Configuration for the orthoscalar toolkit."""

from __future__ import annotations

import json
import os
from functools import lru_cache
from pathlib import Path
from typing import Any

import yaml

from .errors import InvalidInput


ORTHOSCALAR_HOME = Path(os.environ.get("ORTHOSCALAR_HOME", Path.home() / ".orthoscalar"))
CONFIG_PATH = ORTHOSCALAR_HOME / "config.yaml"

DEFAULT_CONFIG: dict[str, dict[str, Any]] = {
    "tolerances": {
        "orthoscalar": 1e-9,
        "rank": 1e-9,
        "equivalence": 1e-8,
        "constraint": 1e-12,
        "cluster": 1e-6,
    },
    "enumeration": {
        "max_volume": 2_000_000,
        "finite_bound": 6,
        "extended_multiple": 3,
    },
    "reduction": {
        "max_steps": 200,
    },
    "characters": {
        "off_support_default": 1.0,
    },
    "sampling": {
        "max_attempts": 2000,
        "margin": 0.12,
    },
    "cli": {
        "seed": 0,
        "format": "json",
    },
    "telemetry": {
        "enabled": True,
    },
}


def ensure_home() -> Path:
    ORTHOSCALAR_HOME.mkdir(parents=True, exist_ok=True)
    return ORTHOSCALAR_HOME


@lru_cache(maxsize=1)
def load_config() -> dict[str, dict[str, Any]]:
    """Defaults merged with the user's config.yaml, section by section."""
    merged = json.loads(json.dumps(DEFAULT_CONFIG))
    if not CONFIG_PATH.exists():
        return merged

    with open(CONFIG_PATH, encoding="utf-8") as handle:
        data = yaml.safe_load(handle) or {}
    if not isinstance(data, dict):
        raise InvalidInput(f"{CONFIG_PATH} must contain a mapping, got {type(data).__name__}")

    for section, values in data.items():
        if section not in merged:
            raise InvalidInput(f"Unknown config section '{section}' in {CONFIG_PATH}")
        if not isinstance(values, dict):
            raise InvalidInput(f"Config section '{section}' must be a mapping")
        merged[section].update(values)
    return merged


def get_setting(section: str, key: str) -> Any:
    return load_config()[section][key]


def tolerance(name: str, override: float | None = None) -> float:
    if override is not None:
        if override <= 0:
            raise InvalidInput(f"Tolerance must be positive, got {override}")
        return float(override)
    return float(get_setting("tolerances", name))


def save_config(config: dict[str, dict[str, Any]]) -> None:
    ensure_home()
    with open(CONFIG_PATH, "w", encoding="utf-8") as handle:
        yaml.safe_dump(config, handle, default_flow_style=False, sort_keys=True)
    load_config.cache_clear()


def set_setting(dotted_key: str, raw_value: str) -> dict[str, dict[str, Any]]:
    """Update one `section.key` in the user file; the value is parsed as YAML."""
    section, _, key = dotted_key.partition(".")
    if not key or section not in DEFAULT_CONFIG or key not in DEFAULT_CONFIG[section]:
        raise InvalidInput(f"Unknown setting '{dotted_key}'")

    user: dict[str, dict[str, Any]] = {}
    if CONFIG_PATH.exists():
        with open(CONFIG_PATH, encoding="utf-8") as handle:
            user = yaml.safe_load(handle) or {}
    user.setdefault(section, {})[key] = yaml.safe_load(raw_value)
    save_config(user)
    return load_config()
