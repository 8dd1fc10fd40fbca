"""Domain records shared by the channel, camera and analysis modules.

All records are frozen; validation happens once in ``__post_init__`` so that
every downstream operation may assume well-formed inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd

from src.errors import DomainError


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise DomainError(message)


def _finite_non_negative(name: str, value: float) -> None:
    _require(math.isfinite(value) and value >= 0, f"{name} must be finite and >= 0, got {value!r}")


def _finite_positive(name: str, value: float) -> None:
    _require(math.isfinite(value) and value > 0, f"{name} must be finite and > 0, got {value!r}")


@dataclass(frozen=True)
class TurbulenceProfile:
    """Coefficients of the three-term altitude model of C_n^2 (m^-2/3, meters)."""

    high_alt_coeff: float = 3.6e-3
    # Read literally as "27 x 10^-16"; the usual Hufnagel-Valley value is 2.7e-16.
    mid_alt_coeff: float = 2.7e-15
    ground_cn2: float = 1e-14
    high_scale: float = 1000.0
    mid_scale: float = 1500.0
    ground_scale: float = 100.0
    alt_prefactor: float = 1e-5

    def __post_init__(self) -> None:
        _finite_non_negative("high_alt_coeff", self.high_alt_coeff)
        _finite_non_negative("mid_alt_coeff", self.mid_alt_coeff)
        _finite_non_negative("ground_cn2", self.ground_cn2)
        _finite_positive("high_scale", self.high_scale)
        _finite_positive("mid_scale", self.mid_scale)
        _finite_positive("ground_scale", self.ground_scale)
        _finite_positive("alt_prefactor", self.alt_prefactor)


@dataclass(frozen=True)
class ChannelParams:
    wavelength: float = 1550e-9
    link_length: float = 2000.0
    rytov_constant: float = 1.23
    outage_target: float = 1e-6

    def __post_init__(self) -> None:
        _finite_positive("wavelength", self.wavelength)
        _finite_positive("link_length", self.link_length)
        # zero is admitted: a turbulence-free channel
        _finite_non_negative("rytov_constant", self.rytov_constant)
        _require(
            0 < self.outage_target <= 0.5,
            f"outage_target must lie in (0, 0.5], got {self.outage_target!r}",
        )


@dataclass(frozen=True)
class PowerMargin:
    linear: float
    decibels: float

    def __post_init__(self) -> None:
        _require(self.linear >= 1.0, f"power margin must be >= 1, got {self.linear!r}")


class ResolutionClass(str, Enum):
    OBSERVATION_DETECTION = "observation_detection"
    RECOGNITION = "recognition"
    IDENTIFICATION = "identification"

    @property
    def rank(self) -> int:
        return list(ResolutionClass).index(self)


@dataclass(frozen=True)
class ResolutionClassification:
    resolution_class: ResolutionClass
    density_ppf: float
    beyond_table: bool = False


@dataclass(frozen=True)
class CameraSpec:
    """Camera body and lens. Lengths in meters, angles in radians."""

    horizontal_pixels: int = 2000
    sensor_width: float = 18e-3
    focal_range: Tuple[float, float] = (10e-3, 180e-3)
    fov_bounds: Tuple[float, float] = (math.radians(5.0), math.radians(120.0))
    use_focal_range: bool = True

    def __post_init__(self) -> None:
        _require(
            isinstance(self.horizontal_pixels, int) and self.horizontal_pixels > 0,
            f"horizontal_pixels must be a positive integer, got {self.horizontal_pixels!r}",
        )
        _finite_positive("sensor_width", self.sensor_width)
        f_min, f_max = self.focal_range
        _finite_positive("focal_min", f_min)
        _finite_positive("focal_max", f_max)
        _require(f_min <= f_max, f"focal range is inverted: {f_min} > {f_max}")
        fov_min, fov_max = self.fov_bounds
        _require(
            0 < fov_min < fov_max < math.pi,
            f"fov bounds must satisfy 0 < min < max < pi, got ({fov_min}, {fov_max})",
        )


@dataclass(frozen=True)
class ImageRequirement:
    resolution: float = 100.0  # pixels per meter
    required_class: Optional[ResolutionClass] = None

    def __post_init__(self) -> None:
        _finite_positive("resolution", self.resolution)


@dataclass(frozen=True)
class ViewGeometry:
    fov: float
    altitude: float
    swath: float
    c1: float

    @property
    def cod(self) -> float:
        """Camera-object distance; identical to the link altitude for nadir views."""
        return self.altitude


@dataclass(frozen=True)
class Scenario:
    channel: ChannelParams = field(default_factory=ChannelParams)
    profile: TurbulenceProfile = field(default_factory=TurbulenceProfile)
    camera: CameraSpec = field(default_factory=CameraSpec)
    requirement: ImageRequirement = field(default_factory=ImageRequirement)
    hsl: float = 20.0

    def __post_init__(self) -> None:
        _finite_positive("hsl", self.hsl)

    @property
    def c1(self) -> float:
        from src.camera import image_constant

        return image_constant(self.camera.horizontal_pixels, self.requirement.resolution)

    @property
    def swath(self) -> float:
        from src.camera import swath_width

        return swath_width(self.camera.horizontal_pixels, self.requirement.resolution)


@dataclass(frozen=True)
class ConstraintRecord:
    name: str
    satisfied: bool
    binding: bool = False
    detail: str = ""


@dataclass(frozen=True)
class FovInterval:
    feasible: bool
    lo: Optional[float] = None
    hi: Optional[float] = None
    diagnostics: Tuple[ConstraintRecord, ...] = ()


@dataclass(frozen=True)
class MonotoneCheck:
    ok: bool
    samples: int
    violation_altitude: Optional[float] = None


@dataclass(frozen=True)
class FovEvaluation:
    fov: float
    altitude: float
    cn2: float
    s: float
    margin: PowerMargin


@dataclass(frozen=True)
class ChainLink:
    name: str
    status: str  # "strict", "flat" or "broken"
    fov: Optional[float] = None
    altitude: Optional[float] = None


@dataclass(frozen=True)
class ChainReport:
    links: Tuple[ChainLink, ...]
    samples: int

    @property
    def holds(self) -> bool:
        return all(link.status != "broken" for link in self.links)

    @property
    def first_broken(self) -> Optional[ChainLink]:
        return next((link for link in self.links if link.status == "broken"), None)


@dataclass(frozen=True)
class OracleResult:
    feasible: bool
    fov_argmin: Optional[float] = None
    margin_min: Optional[PowerMargin] = None
    table: Optional[pd.DataFrame] = field(default=None, compare=False)


@dataclass(frozen=True)
class OptimizationResult:
    feasible: bool
    diagnostics: Tuple[ConstraintRecord, ...]
    fov_opt: Optional[float] = None
    altitude_opt: Optional[float] = None
    cn2_at_opt: Optional[float] = None
    s_at_opt: Optional[float] = None
    margin: Optional[PowerMargin] = None
    monotone_certified: bool = False
    used_oracle: bool = False
    violation_altitude: Optional[float] = None
    fov_interval: Optional[Tuple[float, float]] = None
    focal_length_opt: Optional[float] = None
    chain: Optional[ChainReport] = None

    @property
    def binding_constraints(self) -> List[str]:
        return [record.name for record in self.diagnostics if record.binding]


@dataclass(frozen=True)
class SimulationSpec:
    s: float
    pm_linear: float
    samples: int
    seed: int = 42
    streams: int = 1
    block_size: int = 65_536

    def __post_init__(self) -> None:
        _finite_positive("s", self.s)
        _finite_positive("pm_linear", self.pm_linear)
        _require(
            isinstance(self.samples, int) and self.samples > 0,
            f"samples must be a positive integer, got {self.samples!r}",
        )
        _require(
            isinstance(self.seed, int) and 0 <= self.seed < 2**64,
            f"seed must be a 64-bit unsigned integer, got {self.seed!r}",
        )
        _require(
            isinstance(self.streams, int) and self.streams > 0,
            f"streams must be a positive integer, got {self.streams!r}",
        )
        _require(
            isinstance(self.block_size, int) and self.block_size > 0,
            f"block_size must be a positive integer, got {self.block_size!r}",
        )


@dataclass(frozen=True)
class SimulationReport:
    empirical_outage: float
    exact_outage: float
    approx_outage: float
    stderr: float
    hit_count: int
    samples: int
    mean_intensity: float
    generator: str
    seed: int
    streams: int
    block_size: int

    def as_dict(self) -> Dict[str, Any]:
        return {
            "empirical_outage": self.empirical_outage,
            "exact_outage": self.exact_outage,
            "approx_outage": self.approx_outage,
            "stderr": self.stderr,
            "hit_count": self.hit_count,
            "samples": self.samples,
            "mean_intensity": self.mean_intensity,
            "generator": self.generator,
            "seed": self.seed,
            "streams": self.streams,
            "block_size": self.block_size,
        }


@dataclass(frozen=True)
class ValidationReport:
    target: float
    margin: PowerMargin
    report: SimulationReport
    within_target: bool
    matches_exact: bool

    @property
    def passed(self) -> bool:
        return self.within_target and self.matches_exact
