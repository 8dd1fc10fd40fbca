"""Field-of-view selection for a drone camera feeding an FSO downlink.

The chain behind the optimum: a smaller FOV at a fixed ground swath lifts the
drone, C_n^2 falls with altitude, the log-intensity variance falls with C_n^2
and the required power margin falls with the variance. The optimum is then
the smallest feasible FOV, provided C_n^2 really is decreasing over the
altitudes the feasible FOVs induce. That premise is certified per scenario;
when it fails the exhaustive FOV grid decides instead.
"""

from __future__ import annotations

import logging
import math
from typing import Iterable, List, Optional, Sequence

import numpy as np
import pandas as pd

from src.camera import (
    altitude_from_fov,
    classify_resolution,
    focal_from_fov,
    fov_from_focal,
    meets_requirement,
    pix_per_meter_to_pix_per_foot,
)
from src.channel.linkbudget import log_intensity_variance, power_margin, sigma_factor
from src.channel.turbulence import assert_monotone_decreasing, cn2_at_altitude
from src.errors import DomainError
from src.models import (
    ChainLink,
    ChainReport,
    ConstraintRecord,
    FovEvaluation,
    FovInterval,
    MonotoneCheck,
    OptimizationResult,
    OracleResult,
    Scenario,
)
from src.utils import degrees_label, linear_grid

logger = logging.getLogger(__name__)

DEFAULT_ORACLE_STEP = math.radians(0.25)
DEFAULT_CERTIFICATION_STEP = 1.0  # meters
DEFAULT_CHAIN_SAMPLES = 100
DEFAULT_FLAT_RTOL = 1e-9
MAX_CERTIFICATION_SAMPLES = 2_000_000

SWEEP_COLUMNS = ["fov_deg", "altitude_m", "cn2", "s", "margin_db"]


def feasible_fov_interval(scenario: Scenario) -> FovInterval:
    """Intersect the declared FOV bounds with the focal range and check the gates."""
    camera = scenario.camera
    records: List[ConstraintRecord] = []
    feasible = True

    swath = scenario.swath
    if swath >= scenario.hsl:
        records.append(ConstraintRecord(
            "swath >= hsl", True, binding=math.isclose(swath, scenario.hsl),
            detail=f"swath {swath:g} m covers HSL {scenario.hsl:g} m",
        ))
    else:
        feasible = False
        records.append(ConstraintRecord(
            "swath >= hsl", False,
            detail=f"swath < HSL ({swath:g} m < {scenario.hsl:g} m)",
        ))

    required = scenario.requirement.required_class
    if required is not None:
        density = pix_per_meter_to_pix_per_foot(scenario.requirement.resolution)
        achieved = classify_resolution(density).resolution_class
        if meets_requirement(density, required):
            records.append(ConstraintRecord(
                "resolution class", True,
                detail=f"{density:g} pix/ft is {achieved.value}, requirement {required.value}",
            ))
        else:
            feasible = False
            records.append(ConstraintRecord(
                "resolution class", False,
                detail=f"{density:g} pix/ft only reaches {achieved.value}, requirement {required.value}",
            ))

    lo, hi = camera.fov_bounds
    lo_source = hi_source = "fov bounds"
    if camera.use_focal_range:
        f_min, f_max = camera.focal_range
        focal_lo = fov_from_focal(camera.sensor_width, f_max)
        focal_hi = fov_from_focal(camera.sensor_width, f_min)
        if focal_lo > lo:
            lo, lo_source = focal_lo, "focal range"
        if focal_hi < hi:
            hi, hi_source = focal_hi, "focal range"

    sources = ["fov bounds"] + (["focal range"] if camera.use_focal_range else [])
    if lo > hi:
        feasible = False
        for name in sources:
            records.append(ConstraintRecord(
                name, False,
                detail=f"fov bounds and focal range do not overlap "
                f"({math.degrees(lo):g} deg > {math.degrees(hi):g} deg)",
            ))
    else:
        for name in sources:
            records.append(ConstraintRecord(
                name, True, binding=(name == lo_source),
                detail=(
                    f"lower end {math.degrees(lo):g} deg from {lo_source}, "
                    f"upper end {math.degrees(hi):g} deg from {hi_source}"
                ),
            ))

    if not feasible:
        return FovInterval(feasible=False, diagnostics=tuple(records))
    return FovInterval(feasible=True, lo=lo, hi=hi, diagnostics=tuple(records))


def _evaluate(scenario: Scenario, fov: float, p0: float, sigma: float) -> FovEvaluation:
    altitude = altitude_from_fov(scenario.c1, fov)
    cn2 = cn2_at_altitude(scenario.profile, altitude)
    s = log_intensity_variance(sigma, cn2)
    return FovEvaluation(fov=fov, altitude=altitude, cn2=cn2, s=s, margin=power_margin(s, p0))


def evaluate_fov(scenario: Scenario, fov: float, p0: Optional[float] = None) -> FovEvaluation:
    p0 = scenario.channel.outage_target if p0 is None else p0
    return _evaluate(scenario, fov, p0, sigma_factor(scenario.channel))


def _evaluate_many(scenario: Scenario, fovs: Iterable[float], p0: Optional[float]) -> List[FovEvaluation]:
    p0 = scenario.channel.outage_target if p0 is None else p0
    sigma = sigma_factor(scenario.channel)
    return [_evaluate(scenario, float(fov), p0, sigma) for fov in sorted(fovs)]


def _sweep_frame(points: Sequence[FovEvaluation]) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "fov_deg": [math.degrees(p.fov) for p in points],
            "altitude_m": [p.altitude for p in points],
            "cn2": [p.cn2 for p in points],
            "s": [p.s for p in points],
            "margin_db": [p.margin.decibels for p in points],
        },
        columns=SWEEP_COLUMNS,
    )


def sweep_fov(scenario: Scenario, fovs: Iterable[float], p0: Optional[float] = None) -> pd.DataFrame:
    """Evaluate the margin chain at each FOV (radians); rows ascend in FOV."""
    return _sweep_frame(_evaluate_many(scenario, fovs, p0))


def margin_curve(scenario: Scenario, fovs_deg: Sequence[float], outages: Iterable[float]) -> pd.DataFrame:
    """Margin in dB versus outage target, one ``margin_db_fov<deg>`` column per FOV."""
    outages = np.asarray(list(outages), dtype=float)
    sigma = sigma_factor(scenario.channel)
    columns = {"p0": outages}
    for degrees in fovs_deg:
        altitude = altitude_from_fov(scenario.c1, math.radians(degrees))
        s = log_intensity_variance(sigma, cn2_at_altitude(scenario.profile, altitude))
        columns[f"margin_db_fov{degrees_label(degrees)}"] = [
            power_margin(s, float(p0)).decibels for p0 in outages
        ]
    return pd.DataFrame(columns)


def grid_search_oracle(scenario: Scenario, step: float = DEFAULT_ORACLE_STEP) -> OracleResult:
    """Exhaustive margin minimization over the feasible FOV grid.

    Ties go to the smaller FOV, i.e. the higher altitude.
    """
    if not (math.isfinite(step) and step > 0):
        raise DomainError(f"oracle step must be positive, got {step!r}")
    interval = feasible_fov_interval(scenario)
    if not interval.feasible:
        return OracleResult(feasible=False)

    points = _evaluate_many(scenario, linear_grid(interval.lo, interval.hi, step), None)
    margins = np.array([p.margin.linear for p in points])
    best = points[int(np.argmin(margins))]
    return OracleResult(
        feasible=True,
        fov_argmin=best.fov,
        margin_min=best.margin,
        table=_sweep_frame(points),
    )


def margin_gain(scenario: Scenario, fov_a: float, fov_b: float, p0: Optional[float] = None) -> float:
    """Margin at ``fov_a`` minus margin at ``fov_b``, in dB."""
    a = evaluate_fov(scenario, fov_a, p0)
    b = evaluate_fov(scenario, fov_b, p0)
    return a.margin.decibels - b.margin.decibels


def gain_table(scenario: Scenario, fovs: Iterable[float], p0: Optional[float] = None) -> pd.DataFrame:
    """Margin saved at each FOV relative to the declared maximum FOV."""
    reference = evaluate_fov(scenario, scenario.camera.fov_bounds[1], p0)
    points = _evaluate_many(scenario, fovs, p0)
    return pd.DataFrame(
        {
            "fov_deg": [math.degrees(p.fov) for p in points],
            "altitude_m": [p.altitude for p in points],
            "margin_db": [p.margin.decibels for p in points],
            "gain_db": [reference.margin.decibels - p.margin.decibels for p in points],
        }
    )


def _link_status(
    name: str,
    values: np.ndarray,
    increasing_with_fov: bool,
    fovs: np.ndarray,
    altitudes: np.ndarray,
    rtol: float,
) -> ChainLink:
    status = "strict"
    for i in range(len(values) - 1):
        lower, upper = values[i], values[i + 1]
        scale = max(abs(lower), abs(upper))
        diff = upper - lower
        if scale == 0 or abs(diff) <= rtol * scale:
            status = "flat"
        elif (diff > 0) != increasing_with_fov:
            return ChainLink(name, "broken", fov=float(fovs[i]), altitude=float(altitudes[i]))
    return ChainLink(name, status)


def verify_monotone_chain(
    scenario: Scenario,
    n_samples: int = DEFAULT_CHAIN_SAMPLES,
    flat_rtol: float = DEFAULT_FLAT_RTOL,
) -> ChainReport:
    """Check FOV down => altitude up => C_n^2 down => s down => margin down.

    Pairs are inspected from the smallest FOV upward, so a broken link reports
    the sample nearest the high-altitude end.
    """
    interval = feasible_fov_interval(scenario)
    if not interval.feasible:
        return ChainReport(links=(ChainLink("feasibility", "broken"),), samples=0)
    n = max(int(n_samples), 1)
    fovs = np.linspace(interval.lo, interval.hi, n) if n > 1 else np.array([interval.lo])
    points = _evaluate_many(scenario, fovs, None)
    altitudes = np.array([p.altitude for p in points])
    links = (
        _link_status("altitude_up", altitudes, False, fovs, altitudes, flat_rtol),
        _link_status("cn2_down", np.array([p.cn2 for p in points]), True, fovs, altitudes, flat_rtol),
        _link_status("s_down", np.array([p.s for p in points]), True, fovs, altitudes, flat_rtol),
        _link_status(
            "margin_down", np.array([p.margin.linear for p in points]), True, fovs, altitudes, flat_rtol
        ),
    )
    return ChainReport(links=links, samples=n)


def optimize(
    scenario: Scenario,
    oracle_step: float = DEFAULT_ORACLE_STEP,
    certification_step: float = DEFAULT_CERTIFICATION_STEP,
    chain_samples: int = DEFAULT_CHAIN_SAMPLES,
    flat_rtol: float = DEFAULT_FLAT_RTOL,
    max_certification_samples: int = MAX_CERTIFICATION_SAMPLES,
) -> OptimizationResult:
    interval = feasible_fov_interval(scenario)
    if not interval.feasible:
        failed = [record.detail for record in interval.diagnostics if not record.satisfied]
        logger.warning("Scenario is infeasible: %s", "; ".join(failed))
        return OptimizationResult(feasible=False, diagnostics=interval.diagnostics)

    top = altitude_from_fov(scenario.c1, interval.lo)
    bottom = altitude_from_fov(scenario.c1, interval.hi)
    if top > bottom:
        step = max(certification_step, (top - bottom) / max(int(max_certification_samples), 1))
        if step > certification_step:
            logger.debug("Certification step widened to %.3g m over [%.1f, %.1f] m", step, bottom, top)
        check = assert_monotone_decreasing(scenario.profile, (bottom, top), step)
    else:
        check = MonotoneCheck(ok=True, samples=1)

    used_oracle = False
    fov = interval.lo
    if not check.ok:
        logger.info(
            "C_n^2 not decreasing over [%.1f, %.1f] m (first violation at %.1f m); using grid search",
            bottom, top, check.violation_altitude,
        )
        oracle = grid_search_oracle(scenario, oracle_step)
        fov = oracle.fov_argmin
        used_oracle = True

    point = evaluate_fov(scenario, fov)
    chain = verify_monotone_chain(scenario, chain_samples, flat_rtol) if chain_samples > 0 else None
    logger.info(
        "Optimum FOV %.4f deg at %.2f m needs %.3f dB",
        math.degrees(fov), point.altitude, point.margin.decibels,
    )
    return OptimizationResult(
        feasible=True,
        diagnostics=interval.diagnostics,
        fov_opt=fov,
        altitude_opt=point.altitude,
        cn2_at_opt=point.cn2,
        s_at_opt=point.s,
        margin=point.margin,
        monotone_certified=check.ok,
        used_oracle=used_oracle,
        violation_altitude=check.violation_altitude,
        fov_interval=(interval.lo, interval.hi),
        focal_length_opt=focal_from_fov(scenario.camera.sensor_width, fov),
        chain=chain,
    )
