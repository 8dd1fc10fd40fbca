import math

import numpy as np

from src.errors import DomainError

# Slack for step counts that land a hair under an integer after subtraction.
_GRID_SLACK = 1e-9


def linear_grid(lo: float, hi: float, step: float, include_end: bool = False) -> np.ndarray:
    """Points ``lo + k*step`` up to ``hi``.

    With ``include_end`` the upper bound is appended when it is not already a
    grid point. A step wider than the interval yields ``[lo]`` (plus ``hi``
    when ``include_end``).
    """
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise DomainError(f"grid bounds must be finite, got [{lo}, {hi}]")
    if not (math.isfinite(step) and step > 0):
        raise DomainError(f"grid step must be positive, got {step!r}")
    if hi < lo:
        raise DomainError(f"grid interval is inverted: [{lo}, {hi}]")

    count = int(math.floor((hi - lo) / step + _GRID_SLACK))
    grid = lo + step * np.arange(count + 1, dtype=float)
    grid[-1] = min(grid[-1], hi)
    if include_end and hi - grid[-1] > _GRID_SLACK * step:
        grid = np.append(grid, hi)
    return grid


def degrees_label(value_deg: float) -> str:
    return f"{value_deg:g}"
