"""Command-line interface: run points, sweeps and grid searches to CSV.

Usage:
    python main.py point --config defaults --seed 7
    python main.py sweep-beta --grid 0:1:0.25 --trials 2000
    python main.py sweep-lambda --preset ultra-dense --threads 8
    python main.py compare-association --out results/assoc.csv
    python main.py optimize --over lambda_s --levels 0.25,0.75
    python main.py replay results/assoc.csv.manifest.json
    python main.py --show-defaults

Every CSV gets a `<csv>.manifest.json` companion holding the resolved
parameters, grid, options and seed; `replay` re-runs it bit-exactly.

Exit status: 0 success, 1 parameter or config error, 2 runtime error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Sequence

from src import __version__
from src.config import get_config
from src.config.presets import (
    PARAM_PRESETS,
    get_grid_preset,
    get_param_preset,
)
from src.config.sim_config import (
    params_from_dict,
    params_to_dict,
    parse_config,
    parse_grid,
    render_defaults,
)
from src.domain.errors import ConfigError, ParameterError, SimulationError
from src.domain.models import (
    Objective,
    PointEstimate,
    RunManifest,
    SimParams,
    SweepResult,
    SweptParam,
)
from src.fs.utils import load_manifest, manifest_path_for, write_csv, write_manifest
from src.log.logger import setup_logger
from src.service.monte_carlo_service import MonteCarloService
from src.service.sweep_service import DEFAULT_LAMBDA_RATIO, SweepService

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_RUNTIME_ERROR = 2

COMMANDS = (
    "point",
    "sweep-lambda",
    "sweep-beta",
    "compare-pathloss",
    "compare-association",
    "optimize",
)

ESTIMATE_COLUMNS = [
    "outage_mean",
    "outage_ci_lo",
    "outage_ci_hi",
    "ee_mean",
    "ee_ci_lo",
    "ee_ci_hi",
    "n_trials",
    "n_failed",
    "rate_mean",
    "cap_fraction",
]

OPTIMIZE_COLUMNS = [
    "level",
    "objective",
    "optimal_value",
    "metric_mean",
    "metric_ci_lo",
    "metric_ci_hi",
    "runner_up_value",
    "ci_separated",
    "n_trials",
]

DEFAULT_GRID_PRESETS = {
    "sweep-lambda": "sparse",
    "compare-pathloss": "sparse",
    "sweep-beta": "standard",
    "compare-association": "association",
}


class _ArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors as ConfigError."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise ConfigError(message, key="argv")


@dataclass
class RunRequest:
    """Fully resolved run; exactly what a manifest records."""

    command: str
    params: SimParams
    grid: tuple[float, ...] = ()
    options: dict[str, Any] = field(default_factory=dict)
    presets: dict[str, str] = field(default_factory=dict)


@dataclass
class RunOutput:
    """CSV content plus trial accounting of a run."""

    header: list[str]
    rows: list[list[Any]]
    n_trials: dict[str, int]
    n_failed: int


def _positive_int(raw: str) -> int:
    value = int(raw)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _non_negative_int(raw: str) -> int:
    value = int(raw)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one sub-parser per command."""
    parser = _ArgumentParser(
        prog="harvest-scn",
        description="Monte Carlo simulator for RF-harvesting small-cell networks",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "--show-defaults",
        action="store_true",
        help="print compiled parameter defaults in config syntax and exit",
    )

    common = _ArgumentParser(add_help=False)
    common.add_argument(
        "--threads",
        type=_positive_int,
        help="worker threads (results do not depend on it; env SIM_THREADS)",
    )
    common.add_argument("--out", type=Path, help="output CSV path")
    common.add_argument("--log-dir", type=Path, help="log directory (env LOG_DIR)")

    model = _ArgumentParser(add_help=False)
    model.add_argument(
        "--config",
        help=f"config file or parameter preset ({', '.join(sorted(PARAM_PRESETS))})",
    )
    model.add_argument("--seed", type=_non_negative_int, help="master seed")
    model.add_argument("--trials", type=_positive_int, help="trials per point")

    grid = _ArgumentParser(add_help=False)
    grid.add_argument(
        "--grid",
        help="start:stop:step, log:start:stop:count or a comma list",
    )
    grid.add_argument("--preset", help="named grid preset")

    coupling = _ArgumentParser(add_help=False)
    coupling.add_argument(
        "--lambda-ratio",
        type=float,
        default=DEFAULT_LAMBDA_RATIO,
        help="lambda_m = lambda_s / ratio along lambda sweeps (default 50)",
    )
    coupling.add_argument(
        "--fixed-lambda-m",
        action="store_true",
        help="keep lambda_m from the config instead of coupling it",
    )

    subparsers = parser.add_subparsers(dest="command", parser_class=_ArgumentParser)
    subparsers.add_parser(
        "point", parents=[common, model], help="estimate one parameter point"
    )
    subparsers.add_parser(
        "sweep-lambda",
        parents=[common, model, grid, coupling],
        help="sweep the SBS intensity",
    )
    subparsers.add_parser(
        "sweep-beta", parents=[common, model, grid], help="sweep the on-grid proportion"
    )
    pathloss = subparsers.add_parser(
        "compare-pathloss",
        parents=[common, model, grid, coupling],
        help="lambda sweep under dual- and single-slope path loss",
    )
    pathloss.add_argument(
        "--single-alpha", type=float, default=4.0, help="single-slope exponent"
    )
    subparsers.add_parser(
        "compare-association",
        parents=[common, model, grid],
        help="beta sweep for both association policies",
    )
    optimize = subparsers.add_parser(
        "optimize",
        parents=[common, model, grid, coupling],
        help="grid-search optimum at several levels of the other parameter",
    )
    optimize.add_argument(
        "--over",
        choices=[p.value for p in SweptParam],
        default=SweptParam.LAMBDA_S.value,
        help="parameter to optimise",
    )
    optimize.add_argument(
        "--objective",
        choices=[o.value for o in Objective],
        default=Objective.MIN_OUTAGE.value,
    )
    optimize.add_argument(
        "--levels",
        help="values of the other parameter (grid syntax); "
        "default 0.25,0.5,0.75 for beta, the config lambda_s for lambda_s",
    )
    replay = subparsers.add_parser(
        "replay", parents=[common], help="re-run a manifest and rewrite its CSV"
    )
    replay.add_argument("manifest", type=Path, help="path to <csv>.manifest.json")
    return parser


def _resolve_params(args: argparse.Namespace) -> tuple[SimParams, dict[str, str]]:
    presets: dict[str, str] = {}
    source = args.config
    if source is None:
        params = SimParams()
    elif not Path(source).exists() and source in PARAM_PRESETS:
        params = get_param_preset(source)
        presets["params"] = source
    else:
        params = parse_config(source)

    overrides: dict[str, Any] = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.trials is not None:
        overrides["n_trials"] = args.trials
    return params.with_overrides(**overrides), presets


def _resolve_grid(
    args: argparse.Namespace, kind: str, default_preset: str, params: SimParams
) -> tuple[tuple[float, ...], SimParams, Optional[str]]:
    if args.grid is not None and args.preset is not None:
        raise ConfigError("use --grid or --preset, not both", key="grid")
    if args.grid is not None:
        return parse_grid(args.grid), params, None
    preset = get_grid_preset(kind, args.preset or default_preset)
    if preset.target_sbs_count and not params.target_sbs_count:
        params = params.with_overrides(target_sbs_count=preset.target_sbs_count)
    return preset.values, params, preset.name


def request_from_args(args: argparse.Namespace) -> RunRequest:
    """Resolve flags, config file and presets into a RunRequest.

    Precedence: flag > config file > compiled default.
    """
    params, presets = _resolve_params(args)
    command = args.command
    options: dict[str, Any] = {}
    if command == "point":
        return RunRequest(command, params, presets=presets)

    if hasattr(args, "lambda_ratio"):
        options["lambda_ratio"] = None if args.fixed_lambda_m else args.lambda_ratio
    if command == "compare-pathloss":
        options["single_alpha"] = args.single_alpha

    if command == "optimize":
        over = SweptParam(args.over)
        kind = over.value
        default_preset = "sparse" if over is SweptParam.LAMBDA_S else "standard"
        if args.levels is not None:
            levels = parse_grid(args.levels)
        elif over is SweptParam.LAMBDA_S:
            levels = (0.25, 0.5, 0.75)
        else:
            levels = (params.lambda_s,)
        options.update(over=over.value, objective=args.objective, levels=list(levels))
    else:
        kind = "lambda_s" if command in ("sweep-lambda", "compare-pathloss") else "beta"
        default_preset = DEFAULT_GRID_PRESETS[command]

    grid, params, preset_name = _resolve_grid(args, kind, default_preset, params)
    if preset_name:
        presets["grid"] = preset_name
    return RunRequest(command, params, grid=tuple(grid), options=options, presets=presets)


def request_from_manifest(manifest: RunManifest) -> RunRequest:
    """Rebuild the RunRequest recorded in a manifest."""
    if manifest.command not in COMMANDS:
        raise ParameterError(
            f"manifest command {manifest.command!r} is not replayable", key="manifest"
        )
    params = params_from_dict(manifest.params)
    if params.seed != manifest.seed:
        raise ParameterError("manifest seed disagrees with its params", key="manifest")
    return RunRequest(
        command=manifest.command,
        params=params,
        grid=tuple(manifest.grid),
        options=dict(manifest.options),
        presets=dict(manifest.presets),
    )


def _estimate_cells(point: PointEstimate) -> list[Any]:
    return [
        point.outage.mean,
        point.outage.ci_low,
        point.outage.ci_high,
        point.ee.mean,
        point.ee.ci_low,
        point.ee.ci_high,
        point.outage.n_trials,
        point.n_failed,
        point.rate.mean,
        point.cap_fraction,
    ]


def _sweep_rows(sweep: SweepResult, prefix: Sequence[Any] = ()) -> list[list[Any]]:
    return [
        [*prefix, value, *_estimate_cells(point)]
        for value, point in zip(sweep.grid, sweep.points)
    ]


def _accounting(
    points: Sequence[PointEstimate], n_requested: int
) -> tuple[dict[str, int], int]:
    valid = sum(point.outage.n_trials for point in points)
    counts = {
        "per_point": n_requested,
        "outage": valid,
        "ee": sum(point.ee.n_trials for point in points),
        "rate": sum(point.rate.n_trials for point in points),
    }
    return counts, sum(point.n_failed for point in points)


def execute(request: RunRequest, sweeps: SweepService) -> RunOutput:
    """Run a resolved request and lay its results out as CSV rows."""
    params = request.params
    options = request.options
    lambda_ratio = options.get("lambda_ratio", DEFAULT_LAMBDA_RATIO)
    command = request.command

    if command == "point":
        point = sweeps.monte_carlo.estimate(params)
        header = ["lambda_s", "lambda_m", "beta", *ESTIMATE_COLUMNS]
        rows = [[params.lambda_s, params.lambda_m, params.beta, *_estimate_cells(point)]]
        points = [point]
    elif command in ("sweep-lambda", "sweep-beta"):
        if command == "sweep-lambda":
            sweep = sweeps.sweep_lambda(params, request.grid, lambda_ratio)
        else:
            sweep = sweeps.sweep_beta(params, request.grid)
        header = ["param_value", *ESTIMATE_COLUMNS]
        rows = _sweep_rows(sweep)
        points = list(sweep.points)
    elif command == "compare-pathloss":
        results = sweeps.compare_pathloss(
            params,
            request.grid,
            lambda_ratio,
            single_alpha=float(options.get("single_alpha", 4.0)),
        )
        header = ["pathloss_mode", "param_value", *ESTIMATE_COLUMNS]
        rows = []
        points = []
        for mode, sweep in results.items():
            rows.extend(_sweep_rows(sweep, (mode.value,)))
            points.extend(sweep.points)
    elif command == "compare-association":
        results = sweeps.compare_association(params, request.grid)
        header = ["association", "param_value", *ESTIMATE_COLUMNS]
        rows = []
        points = []
        for policy, sweep in results.items():
            rows.extend(_sweep_rows(sweep, (policy.value,)))
            points.extend(sweep.points)
    elif command == "optimize":
        objective = Objective(options["objective"])
        optima = sweeps.optimize(
            params,
            SweptParam(options["over"]),
            [float(v) for v in options["levels"]],
            request.grid,
            objective,
            lambda_ratio,
        )
        header = list(OPTIMIZE_COLUMNS)
        rows = [
            [
                optimum.level,
                objective.value,
                optimum.report.param_value,
                optimum.report.estimate.mean,
                optimum.report.estimate.ci_low,
                optimum.report.estimate.ci_high,
                optimum.report.runner_up_value,
                optimum.report.ci_separated,
                optimum.report.estimate.n_trials,
            ]
            for optimum in optima
        ]
        points = [point for optimum in optima for point in optimum.sweep.points]
    else:
        raise ParameterError(f"unknown command {command!r}", key="command")

    n_trials, n_failed = _accounting(points, params.n_trials)
    return RunOutput(header, rows, n_trials, n_failed)


def write_outputs(
    out: Path,
    output: RunOutput,
    manifest: Optional[RunManifest],
    logger: logging.Logger,
) -> None:
    """Write the CSV, then its manifest; drop the CSV if the manifest fails."""
    write_csv(out, output.header, output.rows)
    if manifest is None:
        return
    try:
        write_manifest(manifest_path_for(out), manifest)
    except OSError:
        logger.error("Manifest write failed, removing %s", out)
        out.unlink(missing_ok=True)
        raise


def _log_banner(logger: logging.Logger, request: RunRequest, threads: int) -> None:
    logger.info("=" * 60)
    logger.info("harvest-scn %s: %s", __version__, request.command)
    logger.info(
        "seed=%d trials=%d threads=%d path_loss=%s association=%s",
        request.params.seed,
        request.params.n_trials,
        threads,
        request.params.path_loss.mode.value,
        request.params.association.value,
    )
    if request.grid:
        logger.info("grid: %s", ", ".join(f"{v:g}" for v in request.grid))
    logger.info("=" * 60)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments and run one command.

    Returns:
        Exit status (0 success, 1 config error, 2 runtime error)
    """
    logger: Optional[logging.Logger] = None
    out: Optional[Path] = None
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        if args.show_defaults:
            sys.stdout.write(render_defaults())
            return EXIT_OK
        if args.command is None:
            parser.error("a command is required")

        try:
            config = get_config()
        except ValueError as e:
            raise ConfigError(f"environment: {e}", key="env") from e

        logger = setup_logger(
            log_dir=args.log_dir or config.log_dir, level=config.log_level_value
        )
        threads = args.threads or config.threads

        if args.command == "replay":
            manifest_file = args.manifest
            manifest = load_manifest(manifest_file)
            request = request_from_manifest(manifest)
            default_out = manifest_file.with_name(
                manifest_file.name.removesuffix(".manifest.json")
            )
            out = args.out or default_out
        else:
            request = request_from_args(args)
            out = args.out or Path(config.output_dir) / f"{request.command}.csv"

        _log_banner(logger, request, threads)
        sweeps = SweepService(logger, MonteCarloService(logger, threads=threads))
        output = execute(request, sweeps)

        new_manifest = RunManifest(
            command=request.command,
            params=params_to_dict(request.params),
            seed=request.params.seed,
            version=__version__,
            grid=list(request.grid),
            presets=request.presets,
            options=request.options,
            n_trials=output.n_trials,
            n_failed=output.n_failed,
            threads=threads,
        )
        if args.command == "replay" and args.out is None:
            # replaying in place keeps the original manifest
            new_manifest = None
        write_outputs(out, output, new_manifest, logger)
        logger.info("Wrote %d rows to %s", len(output.rows), out)
        return EXIT_OK

    except ParameterError as e:
        _report(logger, f"Configuration error: {e}")
        return EXIT_CONFIG_ERROR
    except (SimulationError, OSError) as e:
        _report(logger, f"Runtime error: {e}")
        return EXIT_RUNTIME_ERROR


def _report(logger: Optional[logging.Logger], message: str) -> None:
    if logger is not None:
        logger.error(message)
    else:
        print(message, file=sys.stderr)


def main() -> int:
    """Console entry point."""
    return run()
