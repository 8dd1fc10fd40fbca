"""Altitude profile of the refractive index structure parameter C_n^2.

The model has three terms, each decaying with altitude ``A`` (meters):

    C_n^2(A) = c_high * (p * A)^10 * exp(-A / h_high)
             + c_mid * exp(-A / h_mid)
             + C_n^2(0) * exp(-A / h_ground)

The first term grows as A^10 before its exponential takes over, so the profile
is not monotone everywhere: that term peaks at ``A = 10 * h_high``.
"""

from __future__ import annotations

import logging
import math
from typing import Tuple

import numpy as np

from src.errors import DomainError
from src.models import MonotoneCheck, TurbulenceProfile
from src.utils import linear_grid

logger = logging.getLogger(__name__)


def _check_altitude(altitude: float) -> None:
    if not (math.isfinite(altitude) and altitude >= 0):
        raise DomainError(f"altitude must be finite and >= 0 m, got {altitude!r}")


def cn2_at_altitude(profile: TurbulenceProfile, altitude: float) -> float:
    """C_n^2 in m^-2/3 at ``altitude`` meters above ground."""
    _check_altitude(altitude)
    # exp(-A/h) folded into the base; A*exp(-A/(10h)) is bounded by 10h/e
    high = profile.high_alt_coeff * (
        profile.alt_prefactor * (altitude * math.exp(-altitude / (10.0 * profile.high_scale)))
    ) ** 10
    mid = profile.mid_alt_coeff * math.exp(-altitude / profile.mid_scale)
    ground = profile.ground_cn2 * math.exp(-altitude / profile.ground_scale)
    return high + mid + ground


def cn2_profile(profile: TurbulenceProfile, altitudes: np.ndarray) -> np.ndarray:
    """Vectorized :func:`cn2_at_altitude` over an array of altitudes."""
    a = np.asarray(altitudes, dtype=float)
    if not np.all(np.isfinite(a)) or np.any(a < 0):
        raise DomainError("altitudes must be finite and >= 0 m")
    return (
        profile.high_alt_coeff * (profile.alt_prefactor * (a * np.exp(-a / (10.0 * profile.high_scale)))) ** 10
        + profile.mid_alt_coeff * np.exp(-a / profile.mid_scale)
        + profile.ground_cn2 * np.exp(-a / profile.ground_scale)
    )


def simplified_cn2(delta1: float, altitude_scale: float, altitude: float) -> float:
    """Single-hump diagnostic form ``delta1 * A * exp(-A / scale)``.

    Never used for optimization. The scale is mandatory: with A in meters the
    bare ``A * exp(-A)`` underflows immediately.
    """
    if not (math.isfinite(delta1) and delta1 > 0):
        raise DomainError(f"delta1 must be positive, got {delta1!r}")
    if not (math.isfinite(altitude_scale) and altitude_scale > 0):
        raise DomainError(f"altitude_scale must be positive, got {altitude_scale!r}")
    _check_altitude(altitude)
    return delta1 * altitude * math.exp(-altitude / altitude_scale)


def assert_monotone_decreasing(
    profile: TurbulenceProfile,
    interval: Tuple[float, float],
    step: float,
) -> MonotoneCheck:
    """Certify that C_n^2 strictly decreases across a sampled altitude grid.

    The grid is walked from the top of the interval downward, so a failure
    reports the violation closest to the high-altitude end. The reported
    altitude is the upper point of the first pair where descending does not
    increase C_n^2.
    """
    lo, hi = interval
    _check_altitude(lo)
    if not math.isfinite(hi) or hi <= lo:
        raise DomainError(f"altitude interval must satisfy 0 <= lo < hi, got [{lo}, {hi}]")
    if not (math.isfinite(step) and step > 0):
        raise DomainError(f"step must be positive, got {step!r}")

    grid = linear_grid(lo, hi, step, include_end=True)
    values = cn2_profile(profile, grid)[::-1]
    descending = grid[::-1]

    # walking down, each value must exceed the one above it
    failures = np.nonzero(values[1:] <= values[:-1])[0]
    if failures.size:
        where = float(descending[failures[0]])
        logger.debug("C_n^2 not decreasing near %.3f m on [%g, %g]", where, lo, hi)
        return MonotoneCheck(ok=False, samples=int(grid.size), violation_altitude=where)
    return MonotoneCheck(ok=True, samples=int(grid.size))
