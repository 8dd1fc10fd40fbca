"""Scenario files: strict JSON (or YAML) documents that override the built-in defaults."""

from __future__ import annotations

import copy
import json
import logging
import math
import os
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from src.errors import DomainError, ScenarioFileError, UsageError
from src.models import (
    CameraSpec,
    ChannelParams,
    ImageRequirement,
    ResolutionClass,
    Scenario,
    TurbulenceProfile,
)
from src.settings import deep_update

logger = logging.getLogger(__name__)

SCENARIO_ENV = "FSOPLAN_CONFIG"

DEFAULT_SCENARIO: Dict[str, Any] = {
    "wavelength_nm": 1550.0,
    "link_length_m": 2000.0,
    "rytov_constant": 1.23,
    "outage_target": 1e-6,
    "ground_cn2": 1e-14,
    "turbulence": {
        "high_alt_coeff": 3.6e-3,
        "mid_alt_coeff": 2.7e-15,
        "high_scale_m": 1000.0,
        "mid_scale_m": 1500.0,
        "ground_scale_m": 100.0,
        "alt_prefactor": 1e-5,
    },
    "camera": {
        "horizontal_pixels": 2000,
        "sensor_width_mm": 18.0,
        "focal_min_mm": 10.0,
        "focal_max_mm": 180.0,
        "fov_min_deg": 5.0,
        "fov_max_deg": 120.0,
        "use_focal_range": True,
    },
    "resolution_pix_per_m": 100.0,
    "required_class": None,
    "hsl_m": 20.0,
}


def _check_keys(data: Dict[str, Any], schema: Dict[str, Any], prefix: str = "") -> None:
    for key, value in data.items():
        path = f"{prefix}{key}"
        if key not in schema:
            raise ScenarioFileError(f"unknown scenario key '{path}'")
        if isinstance(schema[key], dict):
            if not isinstance(value, dict):
                raise ScenarioFileError(f"scenario key '{path}' must be an object")
            _check_keys(value, schema[key], prefix=f"{path}.")


def _number(data: Dict[str, Any], key: str, path: str) -> float:
    try:
        value = float(data[key])
    except (TypeError, ValueError):
        raise ScenarioFileError(f"scenario key '{path}' must be a number, got {data[key]!r}") from None
    if not math.isfinite(value):
        raise ScenarioFileError(f"scenario key '{path}' must be finite, got {data[key]!r}")
    return value


def parse_scenario(data: Optional[Dict[str, Any]] = None) -> Scenario:
    """Build a :class:`Scenario` from a (possibly partial) scenario document."""
    data = data or {}
    if not isinstance(data, dict):
        raise ScenarioFileError("scenario document must be a JSON object")
    _check_keys(data, DEFAULT_SCENARIO)
    merged = deep_update(copy.deepcopy(DEFAULT_SCENARIO), data)
    turb, cam = merged["turbulence"], merged["camera"]

    pixels = _number(cam, "horizontal_pixels", "camera.horizontal_pixels")
    if not pixels.is_integer():
        raise ScenarioFileError(f"scenario key 'camera.horizontal_pixels' must be an integer, got {pixels!r}")

    required = merged["required_class"]
    if required is not None:
        try:
            required = ResolutionClass(required)
        except ValueError:
            choices = ", ".join(c.value for c in ResolutionClass)
            raise ScenarioFileError(
                f"scenario key 'required_class' must be one of {choices}, got {required!r}"
            ) from None

    use_focal = cam["use_focal_range"]
    if not isinstance(use_focal, bool):
        raise ScenarioFileError("scenario key 'camera.use_focal_range' must be true or false")

    try:
        return Scenario(
            channel=ChannelParams(
                wavelength=_number(merged, "wavelength_nm", "wavelength_nm") * 1e-9,
                link_length=_number(merged, "link_length_m", "link_length_m"),
                rytov_constant=_number(merged, "rytov_constant", "rytov_constant"),
                outage_target=_number(merged, "outage_target", "outage_target"),
            ),
            profile=TurbulenceProfile(
                high_alt_coeff=_number(turb, "high_alt_coeff", "turbulence.high_alt_coeff"),
                mid_alt_coeff=_number(turb, "mid_alt_coeff", "turbulence.mid_alt_coeff"),
                ground_cn2=_number(merged, "ground_cn2", "ground_cn2"),
                high_scale=_number(turb, "high_scale_m", "turbulence.high_scale_m"),
                mid_scale=_number(turb, "mid_scale_m", "turbulence.mid_scale_m"),
                ground_scale=_number(turb, "ground_scale_m", "turbulence.ground_scale_m"),
                alt_prefactor=_number(turb, "alt_prefactor", "turbulence.alt_prefactor"),
            ),
            camera=CameraSpec(
                horizontal_pixels=int(pixels),
                sensor_width=_number(cam, "sensor_width_mm", "camera.sensor_width_mm") * 1e-3,
                focal_range=(
                    _number(cam, "focal_min_mm", "camera.focal_min_mm") * 1e-3,
                    _number(cam, "focal_max_mm", "camera.focal_max_mm") * 1e-3,
                ),
                fov_bounds=(
                    math.radians(_number(cam, "fov_min_deg", "camera.fov_min_deg")),
                    math.radians(_number(cam, "fov_max_deg", "camera.fov_max_deg")),
                ),
                use_focal_range=use_focal,
            ),
            requirement=ImageRequirement(
                resolution=_number(merged, "resolution_pix_per_m", "resolution_pix_per_m"),
                required_class=required,
            ),
            hsl=_number(merged, "hsl_m", "hsl_m"),
        )
    except DomainError as exc:
        raise ScenarioFileError(f"invalid scenario: {exc}") from exc


def resolve_scenario_path(explicit: Optional[str] = None) -> Optional[Path]:
    if explicit:
        return Path(explicit)
    from_env = os.environ.get(SCENARIO_ENV)
    return Path(from_env) if from_env else None


def load_scenario(path: Optional[str | os.PathLike[str]] = None) -> Scenario:
    """Load a scenario file; with no path (and no FSOPLAN_CONFIG) use the built-in defaults."""
    scenario_path = resolve_scenario_path(str(path) if path else None)
    if scenario_path is None:
        return parse_scenario()

    try:
        text = scenario_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioFileError(f"cannot read scenario file {scenario_path}: {exc}") from exc

    try:
        if scenario_path.suffix.lower() in {".yaml", ".yml"}:
            data = yaml.safe_load(text) or {}
        else:
            data = json.loads(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ScenarioFileError(f"cannot parse scenario file {scenario_path}: {exc}") from exc

    logger.debug("Loaded scenario from %s", scenario_path)
    return parse_scenario(data)


def with_link_length(scenario: Scenario, link_length: Optional[float]) -> Scenario:
    if link_length is None:
        return scenario
    try:
        return replace(scenario, channel=replace(scenario.channel, link_length=link_length))
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
