"""Nadir drone-camera viewing geometry.

A camera with ``C_p`` horizontal pixels that must deliver ``I`` pixels per
meter on the ground covers a fixed swath ``C_p / I``. Narrowing the field of
view therefore forces the drone higher:

    A = c1 / tan(FOV / 2),   c1 = C_p / (2 I)

and the camera-object distance equals the link altitude ``A``.
"""

from __future__ import annotations

import math
from typing import Tuple

from src.errors import DomainError
from src.models import ResolutionClass, ResolutionClassification, ViewGeometry

METERS_PER_FOOT = 0.3048

# Upper band edges in pixels/ft; intervals are closed on the right.
RESOLUTION_BANDS = (
    (ResolutionClass.OBSERVATION_DETECTION, 0.0, 30.0),
    (ResolutionClass.RECOGNITION, 30.0, 120.0),
    (ResolutionClass.IDENTIFICATION, 120.0, 150.0),
)


def _positive(name: str, value: float) -> None:
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be finite and > 0, got {value!r}")


def _open_angle(fov: float) -> None:
    if not (math.isfinite(fov) and 0 < fov < math.pi):
        raise DomainError(f"field of view must lie in (0, pi) rad, got {fov!r}")


def fov_from_focal(sensor_width: float, focal_length: float) -> float:
    _positive("sensor_width", sensor_width)
    _positive("focal_length", focal_length)
    return 2.0 * math.atan(sensor_width / (2.0 * focal_length))


def focal_from_fov(sensor_width: float, fov: float) -> float:
    _positive("sensor_width", sensor_width)
    _open_angle(fov)
    return sensor_width / (2.0 * math.tan(fov / 2.0))


def swath_width(pixels: int, resolution: float) -> float:
    _positive("pixels", pixels)
    _positive("resolution", resolution)
    return pixels / resolution


def image_constant(pixels: int, resolution: float) -> float:
    """c1 = C_p / (2 I), half the swath in meters."""
    return 0.5 * swath_width(pixels, resolution)


def altitude_from_fov(c1: float, fov: float) -> float:
    _positive("c1", c1)
    _open_angle(fov)
    return c1 / math.tan(fov / 2.0)


def fov_from_altitude(c1: float, altitude: float) -> float:
    _positive("c1", c1)
    _positive("altitude", altitude)
    return 2.0 * math.atan(c1 / altitude)


def view_geometry(c1: float, fov: float) -> ViewGeometry:
    altitude = altitude_from_fov(c1, fov)
    return ViewGeometry(fov=fov, altitude=altitude, swath=2.0 * c1, c1=c1)


def pix_per_meter_to_pix_per_foot(value: float) -> float:
    if not (math.isfinite(value) and value >= 0):
        raise DomainError(f"pixel density must be >= 0, got {value!r}")
    return value * METERS_PER_FOOT


def classify_resolution(density: float) -> ResolutionClassification:
    """Map a ground pixel density in pixels/ft onto the application classes."""
    if not (math.isfinite(density) and density >= 0):
        raise DomainError(f"pixel density must be >= 0, got {density!r}")
    for resolution_class, _, upper in RESOLUTION_BANDS:
        if density <= upper:
            return ResolutionClassification(resolution_class, density)
    return ResolutionClassification(ResolutionClass.IDENTIFICATION, density, beyond_table=True)


def resolution_bounds(resolution_class: ResolutionClass) -> Tuple[float, float]:
    """(lower, upper] pixels/ft band of a class."""
    for band_class, lower, upper in RESOLUTION_BANDS:
        if band_class is resolution_class:
            return lower, upper
    raise DomainError(f"unknown resolution class {resolution_class!r}")


def meets_requirement(density: float, required_class: ResolutionClass) -> bool:
    return classify_resolution(density).resolution_class.rank >= required_class.rank
