"""fsoplan command line: turbulence profiles, margin sweeps, FOV optimization and Monte Carlo checks.

Exit codes: 0 success, 1 domain error or infeasible scenario, 2 bad arguments.
"""

import argparse
import logging
import math
import sys
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import pandas as pd
import yaml

from src.analysis.mcvalidate import simulate_outage, validate_margin
from src.analysis.optimizer import gain_table, margin_curve, optimize, sweep_fov
from src.channel.turbulence import cn2_profile
from src.errors import DomainError, ScenarioFileError, UsageError
from src.event_logger import RunLogger
from src.models import OptimizationResult, SimulationSpec
from src.scenario import load_scenario, with_link_length
from src.settings import load_settings
from src.tables import FORMATS, render_json, sort_table, write_table
from src.utils import linear_grid

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


def _degree_list(text: str) -> List[float]:
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated degrees, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("at least one FOV is required")
    return values


def _count(text: str) -> int:
    """Integer argument that also accepts exponent notation such as 1e6."""
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if not value.is_integer():
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    return int(value)


def _check_fovs(degrees: List[float]) -> None:
    for value in degrees:
        if not 0 < value < 180:
            raise UsageError(f"FOV must lie in (0, 180) degrees, got {value:g}")


def _check_outage(name: str, p0: float) -> None:
    if not 0 < p0 <= 0.5:
        raise UsageError(f"{name} must lie in (0, 0.5], got {p0:g}")


def cmd_profile(args: argparse.Namespace, settings: Dict[str, Any]) -> int:
    if args.alt_min < 0 or args.alt_max < args.alt_min or not args.step > 0:
        raise UsageError(
            f"need 0 <= alt-min <= alt-max and step > 0, got [{args.alt_min:g}, {args.alt_max:g}] step {args.step:g}"
        )
    scenario = load_scenario(args.config)
    altitudes = linear_grid(args.alt_min, args.alt_max, args.step, include_end=True)
    table = pd.DataFrame({"altitude_m": altitudes, "cn2": cn2_profile(scenario.profile, altitudes)})
    write_table(table, args.format, sys.stdout)
    return EXIT_OK


def cmd_margin_curve(args: argparse.Namespace, settings: Dict[str, Any]) -> int:
    _check_fovs(args.fov)
    if not 0 < args.po_min <= args.po_max < 0.5:
        raise UsageError(f"need 0 < po-min <= po-max < 0.5, got [{args.po_min:g}, {args.po_max:g}]")
    if args.points < 1:
        raise UsageError(f"points must be >= 1, got {args.points}")
    scenario = with_link_length(load_scenario(args.config), args.link_length_m)
    outages = np.logspace(math.log10(args.po_min), math.log10(args.po_max), args.points)
    write_table(sort_table(margin_curve(scenario, args.fov, outages), "p0"), args.format, sys.stdout)
    return EXIT_OK


def cmd_fov_sweep(args: argparse.Namespace, settings: Dict[str, Any]) -> int:
    if not (0 < args.fov_min <= args.fov_max < 180) or not args.step > 0:
        raise UsageError(
            f"need 0 < fov-min <= fov-max < 180 and step > 0, got [{args.fov_min:g}, {args.fov_max:g}] step {args.step:g}"
        )
    scenario = with_link_length(load_scenario(args.config), args.link_length_m)
    p0 = scenario.channel.outage_target if args.po is None else args.po
    _check_outage("po", p0)
    fovs = np.radians(linear_grid(args.fov_min, args.fov_max, args.step))
    write_table(sweep_fov(scenario, fovs, p0), args.format, sys.stdout)
    return EXIT_OK


def cmd_gain_table(args: argparse.Namespace, settings: Dict[str, Any]) -> int:
    _check_fovs(args.fov)
    scenario = with_link_length(load_scenario(args.config), args.link_length_m)
    p0 = scenario.channel.outage_target if args.po is None else args.po
    _check_outage("po", p0)
    table = gain_table(scenario, [math.radians(d) for d in args.fov], p0)
    write_table(table, args.format, sys.stdout)
    return EXIT_OK


def _degrees(value: Optional[float]) -> Optional[float]:
    return None if value is None else math.degrees(value)


def optimization_payload(result: OptimizationResult) -> Dict[str, Any]:
    payload: Dict[str, Any] = {
        "feasible": result.feasible,
        "monotone_certified": result.monotone_certified,
        "used_oracle": result.used_oracle,
        "fov_opt_deg": _degrees(result.fov_opt),
        "altitude_opt_m": result.altitude_opt,
        "cn2_at_opt": result.cn2_at_opt,
        "s_at_opt": result.s_at_opt,
        "margin_linear": result.margin.linear if result.margin else None,
        "margin_db": result.margin.decibels if result.margin else None,
        "fov_interval_deg": [math.degrees(v) for v in result.fov_interval] if result.fov_interval else None,
        "focal_length_opt_mm": None if result.focal_length_opt is None else result.focal_length_opt * 1e3,
        "violation_altitude_m": result.violation_altitude,
        "binding_constraints": result.binding_constraints,
        "diagnostics": [
            {"name": r.name, "satisfied": r.satisfied, "binding": r.binding, "detail": r.detail}
            for r in result.diagnostics
        ],
        "monotone_chain": None,
    }
    if result.chain is not None:
        payload["monotone_chain"] = {
            "holds": result.chain.holds,
            "samples": result.chain.samples,
            "links": [
                {
                    "name": link.name,
                    "status": link.status,
                    "fov_deg": _degrees(link.fov),
                    "altitude_m": link.altitude,
                }
                for link in result.chain.links
            ],
        }
    return payload


def cmd_optimize(args: argparse.Namespace, settings: Dict[str, Any]) -> int:
    scenario = load_scenario(args.config)
    opt = settings["optimizer"]
    result = optimize(
        scenario,
        oracle_step=math.radians(opt["oracle_step_deg"]),
        certification_step=opt["certification_step_m"],
        chain_samples=opt["chain_samples"],
        flat_rtol=opt["flat_rtol"],
    )
    payload = optimization_payload(result)
    if args.format == "json":
        sys.stdout.write(render_json(payload))
    else:
        flat = {k: v for k, v in payload.items() if not isinstance(v, (list, dict)) or k == "binding_constraints"}
        flat["binding_constraints"] = ";".join(payload["binding_constraints"])
        write_table(pd.DataFrame([flat]), "csv", sys.stdout)

    if not result.feasible:
        for record in result.diagnostics:
            if not record.satisfied:
                print(f"infeasible: {record.name}: {record.detail}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace, settings: Dict[str, Any]) -> int:
    sim = settings["simulation"]
    samples = sim["samples"] if args.samples is None else args.samples
    seed = sim["seed"] if args.seed is None else args.seed
    streams = sim["streams"] if args.streams is None else args.streams
    if not args.s > 0 or samples < 1 or streams < 1:
        raise UsageError("need s > 0, samples >= 1 and streams >= 1")

    if args.po is not None:
        _check_outage("po", args.po)
        validation = validate_margin(
            args.s, args.po, samples, seed=seed, streams=streams, block_size=sim["block_size"]
        )
        payload = validation.report.as_dict()
        payload.update({
            "s": args.s,
            "pm_linear": validation.margin.linear,
            "pm_db": validation.margin.decibels,
            "target": validation.target,
            "within_target": validation.within_target,
            "matches_exact": validation.matches_exact,
            "passed": validation.passed,
        })
        sys.stdout.write(render_json(payload))
        return EXIT_OK if validation.passed else EXIT_DOMAIN

    if not math.isfinite(args.pm_db) or args.pm_db / 10.0 > sys.float_info.max_10_exp:
        raise UsageError(f"pm-db must be finite and at most {10 * sys.float_info.max_10_exp} dB, got {args.pm_db:g}")
    pm_linear = 10.0 ** (args.pm_db / 10.0)
    report = simulate_outage(
        SimulationSpec(
            s=args.s, pm_linear=pm_linear, samples=samples,
            seed=seed, streams=streams, block_size=sim["block_size"],
        )
    )
    payload = report.as_dict()
    payload.update({"s": args.s, "pm_linear": pm_linear, "pm_db": args.pm_db})
    sys.stdout.write(render_json(payload))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fsoplan",
        description="Plan drone camera FOV against FSO turbulence power margin.",
    )
    parser.add_argument("--settings", default=None, help="Settings YAML (default: settings.yaml or $FSOPLAN_SETTINGS).")
    parser.add_argument(
        "--log-level", type=str.upper, default=None,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="Override the configured log level.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_arg(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", default=None, help="Scenario JSON (default: $FSOPLAN_CONFIG or built-in defaults).")

    def format_arg(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=FORMATS, default=None)

    p = sub.add_parser("profile", help="C_n^2 versus altitude.")
    p.add_argument("--alt-min", type=float, default=0.0)
    p.add_argument("--alt-max", type=float, default=3000.0)
    p.add_argument("--step", type=float, default=100.0)
    scenario_arg(p)
    format_arg(p)
    p.set_defaults(handler=cmd_profile)

    p = sub.add_parser("margin-curve", help="Power margin versus outage target, one column per FOV.")
    p.add_argument("--fov", type=_degree_list, required=True, help="Comma-separated FOVs in degrees.")
    p.add_argument("--po-min", type=float, default=1e-12)
    p.add_argument("--po-max", type=float, default=1e-2)
    p.add_argument("--points", type=_count, default=50)
    p.add_argument("--link-length-m", type=float, default=None)
    scenario_arg(p)
    format_arg(p)
    p.set_defaults(handler=cmd_margin_curve)

    p = sub.add_parser("fov-sweep", help="Altitude, C_n^2, variance and margin versus FOV.")
    p.add_argument("--po", type=float, default=None)
    p.add_argument("--fov-min", type=float, default=5.0)
    p.add_argument("--fov-max", type=float, default=120.0)
    p.add_argument("--step", type=float, default=0.5)
    p.add_argument("--link-length-m", type=float, default=None)
    scenario_arg(p)
    format_arg(p)
    p.set_defaults(handler=cmd_fov_sweep)

    p = sub.add_parser("gain-table", help="Margin gain of each FOV against the maximum FOV.")
    p.add_argument("--fov", type=_degree_list, required=True)
    p.add_argument("--po", type=float, default=None)
    p.add_argument("--link-length-m", type=float, default=None)
    scenario_arg(p)
    format_arg(p)
    p.set_defaults(handler=cmd_gain_table)

    p = sub.add_parser("optimize", help="Select the FOV minimizing the power margin.")
    scenario_arg(p)
    p.add_argument("--format", choices=FORMATS, default="json")
    p.set_defaults(handler=cmd_optimize)

    p = sub.add_parser("simulate", help="Monte Carlo outage of the lognormal channel.")
    p.add_argument("--s", type=float, required=True, help="Log-intensity variance.")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--po", type=float, help="Target outage; validates the formula's margin.")
    target.add_argument("--pm-db", type=float, help="Margin in dB to simulate directly.")
    p.add_argument("--samples", type=_count, default=None)
    p.add_argument("--seed", type=_count, default=None)
    p.add_argument("--streams", type=_count, default=None)
    p.set_defaults(handler=cmd_simulate)

    return parser


def _run(handler: Callable[[argparse.Namespace, Dict[str, Any]], int], args, settings) -> int:
    try:
        return handler(args, settings)
    except (UsageError, ScenarioFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        settings = load_settings(args.settings)
    except (OSError, ValueError, yaml.YAMLError) as exc:
        print(f"error: cannot load settings: {exc}", file=sys.stderr)
        return EXIT_USAGE

    log_conf = settings["logging"]
    level = args.log_level or str(log_conf["level"]).upper()
    if level not in logging.getLevelNamesMapping():
        print(f"error: unknown log level {level!r} in settings", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(
        level=level,
        format=log_conf["format"],
        handlers=[logging.StreamHandler(sys.stderr)],
    )
    if getattr(args, "format", "") is None:
        args.format = settings["output"]["format"]
        if args.format not in FORMATS:
            print(f"error: output.format must be one of {', '.join(FORMATS)}, got {args.format!r}", file=sys.stderr)
            return EXIT_USAGE

    run_logger = RunLogger(settings["storage"]["run_log"], enabled=settings["run_log"]["enabled"])
    code = _run(args.handler, args, settings)
    run_logger.log(
        "command",
        f"{args.command} exited with {code}",
        level="info" if code == EXIT_OK else "warning",
        details={"command": args.command, "argv": list(argv if argv is not None else sys.argv[1:]), "exit_code": code},
    )
    logger.debug("%s finished with exit code %d", args.command, code)
    return code


if __name__ == "__main__":
    sys.exit(main())
