#!/usr/bin/env python3
"""Write the margin-versus-outage and margin-versus-FOV tables for 2 km and 5 km links."""
import argparse
import sys
import logging
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.analysis.optimizer import margin_curve, sweep_fov
from src.errors import FsoPlanError
from src.scenario import load_scenario, with_link_length
from src.tables import write_table
from src.utils import linear_grid

logger = logging.getLogger(__name__)

LINK_LENGTHS_M = (2000.0, 5000.0)
CURVE_FOVS_DEG = (120.0, 90.0, 60.0, 30.0, 10.0)
SWEEP_OUTAGES = (1e-6, 1e-10)


def parse_args(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--config", default=None, help="Scenario file (default: built-in scenario).")
    parser.add_argument("--out-dir", default="figures")
    parser.add_argument("--points", type=int, default=50)
    parser.add_argument("--fov-step", type=float, default=0.5, help="Sweep step in degrees.")
    return parser.parse_args(argv)


def main(argv=None):
    args = parse_args(argv)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    try:
        base = load_scenario(args.config)
        outages = np.logspace(-12, -2, args.points)
        fovs = np.radians(linear_grid(5.0, 120.0, args.fov_step, include_end=True))

        for link_length in LINK_LENGTHS_M:
            scenario = with_link_length(base, link_length)
            tag = f"L{link_length:.0f}m"

            path = out_dir / f"margin_curve_{tag}.csv"
            with open(path, "w", encoding="utf-8", newline="") as f:
                write_table(margin_curve(scenario, CURVE_FOVS_DEG, outages), "csv", f)
            logger.info(f"Wrote {path}")

            for p0 in SWEEP_OUTAGES:
                path = out_dir / f"fov_sweep_{tag}_p{p0:g}.csv"
                with open(path, "w", encoding="utf-8", newline="") as f:
                    write_table(sweep_fov(scenario, fovs, p0), "csv", f)
                logger.info(f"Wrote {path}")
    except FsoPlanError as e:
        logger.error(f"Figure data generation failed: {e}")
        sys.exit(1)


if __name__ == "__main__":
    logging.basicConfig(
        level=logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[logging.StreamHandler(sys.stdout)]
    )
    main()
