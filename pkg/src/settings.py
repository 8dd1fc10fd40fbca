"""Application settings for fsoplan."""

from __future__ import annotations

import copy
import os
from pathlib import Path
from typing import Any, Dict

import yaml


SETTINGS_ENV = "FSOPLAN_SETTINGS"

DEFAULT_SETTINGS: Dict[str, Any] = {
    "logging": {
        "level": "INFO",
        "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    },
    "storage": {"run_log": "logs/runs.jsonl"},
    "run_log": {"enabled": True},
    "optimizer": {
        "oracle_step_deg": 0.25,
        "certification_step_m": 1.0,
        "chain_samples": 100,
        "flat_rtol": 1e-9,
    },
    "simulation": {
        "samples": 1_000_000,
        "seed": 42,
        "streams": 1,
        "block_size": 65_536,
    },
    "output": {"format": "csv"},
}


def deep_update(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    for key, value in overrides.items():
        if (
            key in base
            and isinstance(base[key], dict)
            and isinstance(value, dict)
        ):
            base[key] = deep_update(base[key], value)
        else:
            base[key] = value
    return base


def resolve_settings_path(explicit: str | None = None) -> Path:
    if explicit:
        return Path(explicit)
    return Path(os.environ.get(SETTINGS_ENV, "settings.yaml"))


def load_settings(path: str | os.PathLike[str] | None = None) -> Dict[str, Any]:
    """Load settings from disk and merge with defaults."""

    settings_path = resolve_settings_path(str(path) if path else None)
    settings = copy.deepcopy(DEFAULT_SETTINGS)

    if settings_path.exists():
        with settings_path.open("r", encoding="utf-8") as handle:
            data = yaml.safe_load(handle) or {}
            if not isinstance(data, dict):
                raise ValueError(f"Settings file {settings_path} must hold a mapping")
            deep_update(settings, data)

    # YAML 1.1 reads "1e-9" as a string
    optimizer = settings["optimizer"]
    for key in ("oracle_step_deg", "certification_step_m", "flat_rtol"):
        optimizer[key] = float(optimizer[key])
    optimizer["chain_samples"] = int(optimizer["chain_samples"])
    simulation = settings["simulation"]
    for key in ("samples", "seed", "streams", "block_size"):
        simulation[key] = int(float(simulation[key]))

    settings["settings_path"] = str(settings_path.resolve())
    return settings
