"""
Port Arrival Game - Main Entry Point (Composition Root)

Subcommands:
    ingest       AIS records -> voyages.csv + calibration.json
    slack        voyages.csv -> slack report
    equilibrium  type profile -> Nash sets, green profile, schedules
    simulate     Monte Carlo deviation gains and best-response scan
    synth        write the synthetic AIS corpus

Results go to stdout; logs go to stderr. Exit codes: 0 ok, 2 input error,
3 empty result, 4 internal invariant violation, 1 anything else.
"""
import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

# 1. Setup Logging First (to capture config errors)
from core.logger import configure_logging, get_logger, setup_logging

setup_logging()
logger = get_logger(__name__)

from core import constants
from core.config import RunConfig
from core.exceptions import (
    CalibrationException,
    ConfigurationException,
    CoordinateException,
    EmptyResultException,
    GameException,
    InputFileException,
    InvariantViolationException,
    PortGameException,
    ReportException,
    SimulationException,
)
from core.performance import get_performance_monitor
from core.utils import calculate_file_digest, parse_float_list
from models.game import TypeProfile
from repositories.voyage_repo import VoyageRepository
from services.ais.calibration import congestion_ratio, effective_berths, service_stats, waiting_stats
from services.ais.synthetic import AIS_FILE, METADATA_FILE, generate_synthetic_corpus
from services.ais_service import AisPipelineService
from services.counterfactual_service import (
    merge_reports,
    run_slack_analysis,
    split_windows,
    verify_green_realizability,
)
from services.equilibrium import equilibrium_intervals, green_profile, is_nash, sftw_profile, slack_vector
from services.equilibrium.slack import slack_aggregate
from services.queue.waiting import expected_start_times, queue_outcome
from services.report.exporter import ReportExporter
from services.simulation import best_response_scan, build_prior, deviation_table

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2
EXIT_EMPTY = 3
EXIT_INVARIANT = 4

INPUT_ERRORS = (
    InputFileException,
    CoordinateException,
    ConfigurationException,
    GameException,
    SimulationException,
    ReportException,
)
EMPTY_ERRORS = (EmptyResultException, CalibrationException)

# CLI flag -> RunConfig field
FLAG_FIELDS = {
    "input": "input",
    "out_dir": "out_dir",
    "metadata": "metadata",
    "gamma": "gamma",
    "r_port": "r_port_km",
    "r_berth": "r_berth_km",
    "v_stop": "v_stop_kn",
    "v_go": "v_go_kn",
    "min_stop_hours": "min_stop_hours",
    "trim": "trim",
    "seed": "seed",
    "samples": "samples",
    "window_split": "window_split",
}

SCAN_OWN_TYPE = 0.3
SCAN_STEP = 0.1


def format_number(value: float) -> str:
    return "%g" % value


def format_interval(interval) -> str:
    if interval.is_singleton:
        return "{%s}" % format_number(interval.lower)
    closing = "]" if interval.upper_closed else ")"
    return f"[{format_number(interval.lower)}, {format_number(interval.upper)}{closing}"


def write_manifest(config: RunConfig, command: str, inputs: Sequence[Optional[str]]) -> Path:
    """Resolved configuration and input digests; identical manifests reproduce identical outputs."""
    digests = {str(p): calculate_file_digest(p) for p in inputs if p and Path(p).is_file()}
    payload = {
        "command": command,
        "config": config.model_dump(mode="json"),
        "inputs": digests,
    }
    return ReportExporter(config.out_dir).write_json(payload, constants.MANIFEST_FILE)


# =============================================================================
# Commands
# =============================================================================


def cmd_ingest(config: RunConfig, args: argparse.Namespace) -> int:
    if not config.input:
        raise ConfigurationException("ingest needs --input")

    result = AisPipelineService(config=config).run(config.input, config.metadata)
    waiting = waiting_stats(result.voyages, config.waiting_bin_hours, config.trim)
    service = service_stats(result.voyages, constants.DEFAULT_SERVICE_BIN_HOURS, config.trim)

    repo = VoyageRepository(config.out_dir)
    repo.save_voyages(result.voyages, result.epoch)
    repo.save_calibration(
        result,
        extras={
            "waiting": waiting.model_dump(exclude={"histogram"}),
            "service": service.model_dump(exclude={"histogram"}),
            "effective_berths": effective_berths(service.trimmed_mean, result.gamma),
            "congestion_ratio": congestion_ratio(waiting.mean, result.gamma),
        },
    )
    write_manifest(config, "ingest", [config.input, config.metadata])

    report = result.report
    print(f"records {report.rows_read} (malformed {report.malformed_rows}, "
          f"speed-filtered {report.speed_filtered}, duplicates {report.duplicates_removed})")
    print(f"vessels {report.vessels}, callers {report.frame_callers}, entries {report.entries}")
    print(f"voyages {len(result.voyages)} (incomplete {report.incomplete_voyages}, "
          f"without berth {report.entries_without_berth})")
    print(f"gamma {result.gamma:.4f} h")
    print(f"waiting mean {waiting.mean:.2f} h, median {waiting.median:.2f} h")
    return EXIT_OK


def _slack_gamma(config: RunConfig, voyages_path: Path) -> float:
    if config.gamma is not None:
        return config.gamma
    calibration = voyages_path.parent / constants.CALIBRATION_FILE
    if calibration.is_file():
        return float(VoyageRepository(voyages_path.parent).load_calibration(calibration)["gamma"])
    raise ConfigurationException("slack needs --gamma or a calibration.json next to the voyages file")


def cmd_slack(config: RunConfig, args: argparse.Namespace) -> int:
    if not config.input:
        raise ConfigurationException("slack needs --input (voyages.csv)")

    voyages_path = Path(config.input)
    voyages = VoyageRepository(voyages_path.parent).load_voyages(voyages_path)
    if not voyages:
        raise EmptyResultException("Voyages file holds no voyages", {"path": str(voyages_path)})
    gamma = _slack_gamma(config, voyages_path)

    windows = split_windows(voyages, gamma, config.window_split)
    reports = []
    for window in windows:
        if args.verify:
            verify_green_realizability(window, config.eps_green, config.eps_tie)
        reports.append(run_slack_analysis(window, config.eps_tie))
    report = merge_reports(reports)

    slack_summary = slack_aggregate(report, config.slack_bin_hours, config.trim)
    waiting = waiting_stats(voyages, config.waiting_bin_hours, config.trim)
    ReportExporter(config.out_dir).export_report(
        report,
        slack_summary,
        waiting,
        extras={
            "gamma": gamma,
            "windows": len(windows),
            "window_split": config.window_split,
            "congestion_ratio": congestion_ratio(waiting.mean, gamma),
            "thresholds": {
                "eps_tie": config.eps_tie,
                "slack_bin_hours": config.slack_bin_hours,
                "waiting_bin_hours": config.waiting_bin_hours,
                "trim": config.trim,
            },
        },
    )
    write_manifest(config, "slack", [config.input])

    if len(windows) > 1:
        print(f"windows {len(windows)} ({config.window_split})")
    print(f"mean {report.mean:.4f} h, median {report.median:.4f} h, total {report.total:.4f} h")
    return EXIT_OK


def _number_list(text: str, flag: str) -> List[float]:
    try:
        values = parse_float_list(text)
    except ValueError as e:
        raise ConfigurationException(f"Cannot parse {flag}", {"value": text}) from e
    if not values:
        raise ConfigurationException(f"{flag} is empty", {"value": text})
    return values


def _load_types(config: RunConfig, args: argparse.Namespace) -> TypeProfile:
    gamma, t0 = config.gamma, None
    if args.types:
        types = _number_list(args.types, "--types")
    elif config.input:
        try:
            profile = json.loads(Path(config.input).read_text(encoding="utf-8"))
            types = [float(t) for t in profile["types"]]
        except (OSError, ValueError, KeyError, TypeError) as e:
            raise InputFileException("Cannot read type profile", {"path": config.input}) from e
        gamma = gamma if gamma is not None else profile.get("gamma")
        t0 = profile.get("t0")
    else:
        raise ConfigurationException("equilibrium needs --types or --input")

    if gamma is None:
        raise ConfigurationException("equilibrium needs --gamma")
    return TypeProfile.from_types(types, gamma, t0)


def cmd_equilibrium(config: RunConfig, args: argparse.Namespace) -> int:
    types = _load_types(config, args)
    intervals = equilibrium_intervals(types, epsilon_green=config.eps_green, eps_tie=config.eps_tie)
    green = green_profile(types, config.eps_green, config.eps_tie)
    sftw = sftw_profile(types)
    slack = slack_vector(types, config.eps_tie)

    verdict = None
    if args.verify:
        for profile in (sftw, green):
            queue_outcome(profile, cross_check_cap=config.enumeration_cap)
        verdict = is_nash(green, types, config.eps_probe)
    sftw_starts = expected_start_times(sftw.arrivals, types.gamma, types.t0, sftw.tie_tolerance)
    green_starts = expected_start_times(green.arrivals, types.gamma, types.t0, green.tie_tolerance)

    payload: Dict[str, Any] = {
        "types": types.types,
        "gamma": types.gamma,
        "t0": types.t0,
        "intervals": [dict(iv.model_dump(), player=iv.player + 1) for iv in intervals],
        "green": green.arrivals,
        "sftw": sftw.arrivals,
        "slack": [e.slack for e in slack.entries],
        "slack_total": slack.total,
        "verified": None if verdict is None else verdict.is_equilibrium,
    }
    ReportExporter(config.out_dir).export_equilibrium(intervals, sftw, green, sftw_starts, green_starts, payload)
    write_manifest(config, "equilibrium", [config.input] if not args.types else [])

    for iv in intervals:
        print(f"Θ{iv.player + 1} = {format_interval(iv)}")
    print("green (" + ", ".join(format_number(s) for s in green.arrivals) + ")")
    print(f"slack total {slack.total:.4f} h")

    if verdict is not None:
        if not verdict.is_equilibrium:
            print(
                f"not an equilibrium: player {verdict.player + 1} improves by arriving at "
                f"{format_number(verdict.deviation)} ({verdict.improved_service_time:.6f} < "
                f"{verdict.current_service_time:.6f})"
            )
            raise InvariantViolationException(
                "Green profile failed the Nash check",
                {"player": verdict.player + 1, "deviation": verdict.deviation},
            )
        print("equilibrium")
    return EXIT_OK


def _scan_grid(own_type: float, high: float) -> List[float]:
    steps = int(np.floor((high - own_type) / SCAN_STEP + 1e-9))
    return [round(own_type + k * SCAN_STEP, 10) for k in range(steps + 1)]


def cmd_simulate(config: RunConfig, args: argparse.Namespace) -> int:
    players = list(constants.DEFAULT_SIM_PLAYERS)
    if args.players:
        players = [int(p) for p in _number_list(args.players, "--players")]
    gammas = [config.gamma] if config.gamma is not None else list(constants.DEFAULT_SIM_GAMMAS)
    shifts = list(constants.DEFAULT_SIM_SHIFTS)
    if args.shift is not None:
        shifts = _number_list(args.shift, "--shift")

    cells = deviation_table(players, gammas, shifts, samples=config.samples, seed=config.seed, eps_tie=config.eps_tie)

    # truthful-play scan for the smallest game at the first gamma
    prior = build_prior("uniform", 0.0, 1.0, min(players))
    grid = _scan_grid(SCAN_OWN_TYPE, prior.high)
    scan = best_response_scan(0, SCAN_OWN_TYPE, grid, prior, config.samples, config.seed, gammas[0], config.eps_tie)

    exporter = ReportExporter(config.out_dir)
    exporter.export_deviation_table(cells)
    exporter.export_scan(scan)
    write_manifest(config, "simulate", [])

    for cell in cells:
        verdict = "ok" if cell.non_positive_at_95 else "VIOLATION"
        print(
            f"n={cell.n} gamma={format_number(cell.gamma)} shift={format_number(cell.shift)} "
            f"gain={cell.gain.mean:.6f} ± {cell.gain.half_width_95:.6f} {verdict}"
        )
    print(f"best response to type {format_number(SCAN_OWN_TYPE)}: {format_number(scan.best_arrival)}")

    violations = [c for c in cells if not c.non_positive_at_95]
    if violations:
        raise InvariantViolationException(
            "Deviation gain positive at 95% confidence",
            {"cells": len(violations), "first_n": violations[0].n, "first_gamma": violations[0].gamma},
        )
    return EXIT_OK


def cmd_synth(config: RunConfig, args: argparse.Namespace) -> int:
    ais, metadata = generate_synthetic_corpus(config.seed)
    out_dir = Path(config.out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        ais.to_csv(out_dir / AIS_FILE, index=False, lineterminator="\n")
        metadata.to_csv(out_dir / METADATA_FILE, index=False, lineterminator="\n")
    except OSError as e:
        raise ReportException("Cannot write synthetic corpus", {"dir": str(out_dir), "error": str(e)}) from e
    write_manifest(config, "synth", [])

    print(out_dir / AIS_FILE)
    print(out_dir / METADATA_FILE)
    return EXIT_OK


COMMANDS = {
    "ingest": cmd_ingest,
    "slack": cmd_slack,
    "equilibrium": cmd_equilibrium,
    "simulate": cmd_simulate,
    "synth": cmd_synth,
}


# =============================================================================
# Composition Root
# =============================================================================


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", type=str, help="Input file (AIS CSV, voyages.csv or type-profile JSON)")
    common.add_argument("--out-dir", type=str, help="Output directory")
    common.add_argument("--config", type=str, help="Flat key=value config file")
    common.add_argument("--metadata", type=str, help="Vessel metadata CSV (vessel_id,ship_type)")
    common.add_argument("--gamma", type=float, help="Effective service time (hours)")
    common.add_argument("--r-port", type=float, help="Port geofence radius (km)")
    common.add_argument("--r-berth", type=float, help="Berth geofence radius (km)")
    common.add_argument("--v-stop", type=float, help="Stop speed threshold (knots)")
    common.add_argument("--v-go", type=float, help="Acceleration threshold (knots)")
    common.add_argument("--min-stop-hours", type=float, help="Minimum stop episode length (hours)")
    common.add_argument("--trim", type=float, help="Trimmed-mean fraction per tail")
    common.add_argument("--seed", type=int, help="Root random seed")
    common.add_argument("--samples", type=int, help="Monte Carlo samples per estimate")
    common.add_argument("--window-split", type=str, choices=["none", "day", "week"], help="Split the slack game")

    parser = argparse.ArgumentParser(description="FCFS port arrival game toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("ingest", parents=[common], help="Detect voyages and calibrate gamma")
    slack = sub.add_parser("slack", parents=[common], help="Counterfactual slack report")
    slack.add_argument("--verify", action="store_true", help="Check green-profile completion invariance")
    equilibrium = sub.add_parser("equilibrium", parents=[common], help="Nash sets and green profile")
    equilibrium.add_argument("--types", type=str, help="Comma-separated types, e.g. 0,0.5,3")
    equilibrium.add_argument("--verify", action="store_true", help="Brute-force Nash check of the green profile")
    simulate = sub.add_parser("simulate", parents=[common], help="Monte Carlo deviation tests")
    simulate.add_argument("--players", type=str, help="Comma-separated player counts, e.g. 2,3,4")
    simulate.add_argument("--shift", type=str, help="Comma-separated deviation shifts (hours)")
    sub.add_parser("synth", parents=[common], help="Write the synthetic AIS corpus")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    overrides = {field: getattr(args, flag, None) for flag, field in FLAG_FIELDS.items()}
    return RunConfig.resolve(overrides=overrides, config_path=args.config)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    monitor = get_performance_monitor()

    try:
        config = resolve_config(args)
        configure_logging(
            config.log_level,
            config.log_file,
            config.log_format,
            config.log_max_bytes,
            config.log_backup_count,
        )
        logger.debug(f"[CLI] Running {args.command}", context={"out_dir": config.out_dir})
        with monitor.measure(args.command):
            exit_code = COMMANDS[args.command](config, args)
    except INPUT_ERRORS as e:
        logger.error(f"[CLI] {type(e).__name__}: {e}")
        exit_code = EXIT_INPUT
    except EMPTY_ERRORS as e:
        logger.error(f"[CLI] {type(e).__name__}: {e}")
        exit_code = EXIT_EMPTY
    except InvariantViolationException as e:
        logger.critical(f"[CLI] {type(e).__name__}: {e}")
        exit_code = EXIT_INVARIANT
    except PortGameException as e:
        logger.critical(f"[CLI] Unhandled {type(e).__name__}: {e}", exc_info=True)
        exit_code = EXIT_FAILURE
    except Exception as e:
        logger.critical(f"[CLI] Run failed: {e}", exc_info=True)
        exit_code = EXIT_FAILURE

    monitor.log_summary()
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
