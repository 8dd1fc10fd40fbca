"""Monte Carlo check of the lognormal power-margin formula.

Intensity is drawn as ``I = exp(-s/2 + sqrt(s) Z)`` with ``Z`` standard normal,
so ``E[I] = 1``. An outage is a draw with ``I * PM < 1``.

Samples are cut into fixed-size blocks and block ``b`` always draws from
``SeedSequence(seed, spawn_key=(b,))``. Worker threads ("streams") only decide
which thread runs which block, so hit counts do not depend on the stream count.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Tuple

import numpy as np

from src.channel.linkbudget import (
    margin_excess,
    outage_exact_lognormal,
    outage_from_margin,
    power_margin,
)
from src.errors import StatisticalFloorError
from src.models import SimulationReport, SimulationSpec, ValidationReport

logger = logging.getLogger(__name__)

GENERATOR_ID = "numpy.PCG64 via SeedSequence(seed, spawn_key=(block,))"
MIN_EXPECTED_HITS = 100
DEEP_TAIL_LIMIT = 1e-5
CONFIDENCE_SIGMAS = 3.0


def _block_sizes(samples: int, block_size: int) -> List[int]:
    full, rest = divmod(samples, block_size)
    return [block_size] * full + ([rest] if rest else [])


def _run_block(seed: int, block: int, size: int, s: float, z_threshold: float) -> Tuple[int, float]:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))
    z = rng.standard_normal(size)
    hits = int(np.count_nonzero(z < z_threshold))
    intensity_sum = float(np.exp(-s / 2.0 + math.sqrt(s) * z).sum())
    return hits, intensity_sum


def simulate_outage(spec: SimulationSpec) -> SimulationReport:
    excess = margin_excess(spec.s, spec.pm_linear)
    # ln I < -ln PM  <=>  Z < -(ln PM - s/2) / sqrt(s)
    z_threshold = -excess / math.sqrt(spec.s)

    sizes = _block_sizes(spec.samples, spec.block_size)
    logger.debug("Simulating %d samples in %d blocks on %d streams", spec.samples, len(sizes), spec.streams)
    if spec.streams == 1:
        results = [_run_block(spec.seed, b, n, spec.s, z_threshold) for b, n in enumerate(sizes)]
    else:
        with ThreadPoolExecutor(max_workers=spec.streams) as pool:
            futures = [
                pool.submit(_run_block, spec.seed, b, n, spec.s, z_threshold)
                for b, n in enumerate(sizes)
            ]
            results = [future.result() for future in futures]

    hit_count = sum(hits for hits, _ in results)
    mean_intensity = math.fsum(total for _, total in results) / spec.samples
    empirical = hit_count / spec.samples
    return SimulationReport(
        empirical_outage=empirical,
        exact_outage=outage_exact_lognormal(spec.s, spec.pm_linear),
        approx_outage=outage_from_margin(spec.s, spec.pm_linear),
        stderr=math.sqrt(empirical * (1.0 - empirical) / spec.samples),
        hit_count=hit_count,
        samples=spec.samples,
        mean_intensity=mean_intensity,
        generator=GENERATOR_ID,
        seed=spec.seed,
        streams=spec.streams,
        block_size=spec.block_size,
    )


def check_statistical_floor(p0: float, samples: int) -> None:
    if p0 <= DEEP_TAIL_LIMIT:
        raise StatisticalFloorError(
            f"target outage {p0:g} is a deep-tail target (<= {DEEP_TAIL_LIMIT:g}); "
            "use the analytic Q/Chernoff pair instead"
        )
    if p0 * samples < MIN_EXPECTED_HITS:
        raise StatisticalFloorError(
            f"target outage {p0:g} with {samples} samples expects {p0 * samples:g} outages; "
            f"at least {MIN_EXPECTED_HITS} are needed (p0 * samples >= {MIN_EXPECTED_HITS})"
        )


def validate_margin(
    s: float,
    p0: float,
    samples: int,
    seed: int = 42,
    streams: int = 1,
    block_size: int = 65_536,
) -> ValidationReport:
    """Check that the formula's margin meets ``p0`` under the exact lognormal model."""
    check_statistical_floor(p0, samples)
    margin = power_margin(s, p0)
    report = simulate_outage(
        SimulationSpec(
            s=s, pm_linear=margin.linear, samples=samples,
            seed=seed, streams=streams, block_size=block_size,
        )
    )
    within_target = report.empirical_outage <= p0
    matches_exact = abs(report.empirical_outage - report.exact_outage) <= CONFIDENCE_SIGMAS * report.stderr
    if not (within_target and matches_exact):
        logger.warning(
            "Margin validation failed for s=%g, p0=%g: empirical %.4g, exact %.4g, stderr %.2g",
            s, p0, report.empirical_outage, report.exact_outage, report.stderr,
        )
    return ValidationReport(
        target=p0,
        margin=margin,
        report=report,
        within_target=within_target,
        matches_exact=matches_exact,
    )
