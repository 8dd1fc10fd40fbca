"""Turbulence power margin of a weak-turbulence lognormal FSO link.

The received intensity is modelled as unit-mean lognormal with log-intensity
variance ``s = sigma * C_n^2``. The margin for a target outage ``p0`` is

    PM = exp( sqrt(-2 s ln(2 p0)) + s / 2 )

which inverts the Chernoff bound Q(x) <= exp(-x^2 / 2) / 2 of the lognormal
tail. :func:`outage_exact_lognormal` gives the exact tail for comparison.
"""

from __future__ import annotations

import math

from scipy.special import erfc

from src.errors import DomainError
from src.models import ChannelParams, PowerMargin

# Relative slack when checking ln(PM) >= s/2; dB round trips lose a few ulps.
_MARGIN_RTOL = 1e-12


def sigma_factor(params: ChannelParams) -> float:
    """k * (2 pi / lambda)^(7/6) * L^(11/6), in m^(2/3)."""
    if not params.wavelength > 0 or not params.link_length > 0:
        raise DomainError("wavelength and link length must be positive")
    wave_number = 2.0 * math.pi / params.wavelength
    return params.rytov_constant * wave_number ** (7.0 / 6.0) * params.link_length ** (11.0 / 6.0)


def log_intensity_variance(sigma: float, cn2: float) -> float:
    if sigma < 0 or cn2 < 0:
        raise DomainError(f"sigma and C_n^2 must be >= 0, got sigma={sigma!r}, cn2={cn2!r}")
    s = sigma * cn2
    if not math.isfinite(s):
        raise DomainError(f"log-intensity variance is not finite: {s!r}")
    return s


def to_decibels(linear: float) -> float:
    if not linear > 0:
        raise DomainError(f"decibel conversion needs a positive ratio, got {linear!r}")
    return 10.0 * math.log10(linear)


def power_margin(s: float, p0: float) -> PowerMargin:
    if not (math.isfinite(s) and s >= 0):
        raise DomainError(f"log-intensity variance must be >= 0, got {s!r}")
    if not 0 < p0 <= 0.5:
        raise DomainError(
            f"outage target must lie in (0, 0.5] so that -2 s ln(2 p0) >= 0, got {p0!r}"
        )
    radicand = max(-2.0 * s * math.log(2.0 * p0), 0.0)
    exponent = math.sqrt(radicand) + s / 2.0
    linear = math.exp(exponent)
    return PowerMargin(linear=linear, decibels=10.0 * exponent / math.log(10.0))


def margin_excess(s: float, pm_linear: float) -> float:
    """ln(PM) - s/2, clamped at zero within rounding slack."""
    if not (math.isfinite(s) and s > 0):
        raise DomainError(f"log-intensity variance must be > 0, got {s!r}")
    if not (math.isfinite(pm_linear) and pm_linear > 0):
        raise DomainError(f"power margin must be positive, got {pm_linear!r}")
    excess = math.log(pm_linear) - s / 2.0
    if excess < -_MARGIN_RTOL * max(1.0, s / 2.0):
        raise DomainError(
            f"power margin {pm_linear!r} is below the deterministic minimum e^(s/2) = {math.exp(s / 2.0)!r}"
        )
    return max(excess, 0.0)


def outage_from_margin(s: float, pm_linear: float) -> float:
    """Outage implied by a margin under the Chernoff approximation."""
    excess = margin_excess(s, pm_linear)
    return 0.5 * math.exp(-(excess**2) / (2.0 * s))


def q_function(x: float) -> float:
    """Standard normal upper tail."""
    return 0.5 * float(erfc(x / math.sqrt(2.0)))


def outage_exact_lognormal(s: float, pm_linear: float) -> float:
    """Exact outage P(I < 1/PM) of the unit-mean lognormal channel."""
    excess = margin_excess(s, pm_linear)
    return q_function(excess / math.sqrt(s))
