#!/usr/bin/env python3
"""
tfu-lab command line

Generates extremal and test signals, computes Cohen's class distributions,
runs the verification suites and merges their reports.

Exit codes: 0 success, 1 a verification failed, 2 usage or I/O error.
"""

import argparse
import json
import logging
import sys
from typing import List, Optional, Tuple

import numpy as np

from ..exceptions import KernelSpecError
from ..exceptions.handlers import EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE, handle_exception
from ..models.chirp import ChirpSpec, Partition
from ..models.grid import Grid, Signal
from ..models.kernel import Kernel
from ..models.reports import SuiteReport
from ..models.run_config import RunConfig, Subcommand
from ..services.engine_service import DistributionEngine
from ..services.grid_service import grid_from_span
from ..services.kernel_service import parse_kernel_spec
from ..services.optimal_signal_service import (
    chirp_kernel,
    hermite_function,
    optimal_chirp,
    optimal_gaussian,
    random_decaying_signal,
)
from ..services.verification_service import VerificationService
from ..utils.config import Settings, parse_grid_string, settings as default_settings
from ..utils.io import load_chirp_spec, read_report, read_signal_csv, write_distribution, write_report
from ..utils.io import write_signal_csv

logger = logging.getLogger(__name__)

GAUSSIAN_ZETA = 1.0 / (2.0 * np.pi)
PHASE_OF_SIGNAL = "phase_of_signal"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tfu-lab", description="Time-frequency distributions and uncertainty-bound verification."
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid", help="Grid as M:lo:hi (default from TFU_DEFAULT_GRID)")
    common.add_argument("--tol", type=float, help="Relative tolerance for identity checks")
    common.add_argument("--threads", type=int, help="Worker threads (default from TFU_THREADS)")
    common.add_argument("--log-level", dest="log_level", help="debug, info, warning, error or critical")
    common.add_argument("--out", help="Output path")
    common.add_argument("--seed", type=int, default=0, help="Seed for random signals")

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--signal", help="Signal CSV")
    source.add_argument("--chirp", help="ChirpSpec JSON")
    source.add_argument("--gaussian", action="store_true", help="Optimal Gaussian (uses --zeta, --x0)")
    source.add_argument("--hermite", type=int, help="Hermite function of this order")
    source.add_argument("--random", action="store_true", help="Seeded random decaying signal")
    source.add_argument("--zeta", type=float, help="Envelope parameter")
    source.add_argument("--eps", type=float, help="Reciprocal chirp rate")
    source.add_argument("--x0", type=float, default=0.0, help="Time center")
    source.add_argument("--w0", type=float, default=0.0, help="Frequency center")
    source.add_argument("--partition", choices=["j1", "j2", "j3", "j4"], help="Chirp branch of the single axis")
    source.add_argument("--kernel", default="unit", help="unit | krd | page | timemul:<name>(<params>) | table:<csv>")

    sub = parser.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("generate", parents=[common, source], help="Write a generated signal as CSV")
    compute = sub.add_parser("compute", parents=[common, source], help="Compute a distribution")
    compute.add_argument("--format", choices=["csv", "bin"], help="Output format (default from the extension)")
    verify = sub.add_parser("verify", parents=[common, source], help="Run a suite or one theorem case")
    verify.add_argument("--suite", choices=["lemmas", "theorems", "flandrin", "all"])
    verify.add_argument("--theorem", choices=["T1", "T2", "T3", "T4"])
    report = sub.add_parser("report", parents=[common], help="Validate and merge report files")
    report.add_argument("reports", nargs="+", help="Report JSON files")
    return parser


def configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper()),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        force=True,
    )


def effective_settings(config: RunConfig, base: Optional[Settings] = None) -> Settings:
    """Settings with the command-line overrides applied."""
    base = base or default_settings
    update = {}
    if config.tol is not None:
        update["identity_tol"] = config.tol
    if config.threads is not None:
        update["threads"] = config.threads
    if config.log_level is not None:
        update["log_level"] = config.log_level
    effective = base.model_copy(update=update)
    effective.validate_configuration()
    return effective


def resolve_grid(config: RunConfig, settings: Settings) -> Grid:
    count, lo, hi = parse_grid_string(config.grid) if config.grid else settings.grid_parts
    return grid_from_span(count, lo, hi)


def build_signal(config: RunConfig, grid: Grid) -> Tuple[Signal, Optional[np.ndarray], Optional[ChirpSpec]]:
    """Signal, its analytic phase gradient when known, and the chirp spec it came from."""
    if config.signal is not None:
        return read_signal_csv(config.signal), None, None
    if config.hermite is not None:
        return hermite_function(config.hermite, grid, config.x0), np.zeros((grid.total, 1)), None
    if config.random:
        return random_decaying_signal(grid, np.random.default_rng(config.seed)), None, None

    spec = None
    if config.chirp is not None:
        spec = load_chirp_spec(config.chirp)
    elif not config.gaussian and (config.eps is not None or config.partition is not None):
        spec = ChirpSpec(
            zeta=config.zeta or GAUSSIAN_ZETA,
            eps=config.eps or 1.0,
            x0=[config.x0],
            w0=[config.w0],
            partition=Partition(**{config.partition or "j1": [1]}),
        )
    if spec is not None:
        f, grad = optimal_chirp(spec, grid)
        return f, grad, spec
    return optimal_gaussian(config.zeta or GAUSSIAN_ZETA, grid, [config.x0]), np.zeros((grid.total, 1)), None


def build_kernel(config: RunConfig, spec: Optional[ChirpSpec]) -> Kernel:
    text = config.kernel.strip()
    if text.lstrip("-") == PHASE_OF_SIGNAL:
        if spec is None:
            raise KernelSpecError(f"{PHASE_OF_SIGNAL} needs a generated chirp signal (--chirp, --eps or --partition)", text)
        return chirp_kernel(spec, sign=-1.0 if text.startswith("-") else 1.0)
    return parse_kernel_spec(text)


def log_summary(report: SuiteReport) -> None:
    failed = report.failed_checks
    logger.info("=" * 60)
    logger.info(f"Suite: {report.suite}  grid: {report.grid}  seed: {report.seed}")
    logger.info(f"Checks passed: {len(report.checks) - len(failed)}/{len(report.checks)}")
    for bound in report.bound_reports:
        logger.info(
            f"{bound.case.value}: product_C={bound.measured_product_C:.6e} "
            f"bound={bound.theorem_bound_abscov:.6e} verdict={bound.verdict.value}"
        )
    for check in failed:
        logger.warning(f"FAILED {check.name}: residual={check.residual} tolerance={check.tolerance}")
    logger.info("=" * 60)


def emit_report(report: SuiteReport, out: Optional[str]) -> None:
    if out:
        write_report(report, out)
    else:
        print(json.dumps(report.model_dump(mode="json"), sort_keys=True, indent=2))


# -- subcommands -------------------------------------------------------


def cmd_generate(config: RunConfig, settings: Settings) -> int:
    f, _, _ = build_signal(config, resolve_grid(config, settings))
    write_signal_csv(f, config.out)
    logger.info(f"Generated signal on {f.grid.total} nodes written to {config.out}")
    return EXIT_OK


def cmd_compute(config: RunConfig, settings: Settings) -> int:
    f, _, spec = build_signal(config, resolve_grid(config, settings))
    k = build_kernel(config, spec)
    d = DistributionEngine(settings).cctfd(f, k)
    write_distribution(d, config.out, config.format)
    logger.info(f"{k.tag} distribution {d.values.shape} written to {config.out}")
    return EXIT_OK


def cmd_verify(config: RunConfig, settings: Settings) -> int:
    service = VerificationService(settings)
    if config.theorem is not None:
        f, grad, spec = build_signal(config, resolve_grid(config, settings))
        report = service.run_theorem(config.theorem, f, build_kernel(config, spec), grad, config.seed)
    else:
        grid = resolve_grid(config, settings)
        report = service.run_suite(config.verify_suite, grid, config.seed)
    log_summary(report)
    emit_report(report, config.out)
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_report(config: RunConfig, settings: Settings) -> int:
    reports: List[SuiteReport] = [read_report(path) for path in config.reports]
    for report in reports:
        log_summary(report)
    merged = SuiteReport(
        suite="+".join(report.suite for report in reports),
        seed=reports[0].seed,
        grid=reports[0].grid,
        tolerance=max(report.tolerance for report in reports),
        passed=all(report.passed for report in reports),
        checks=[check for report in reports for check in report.checks],
        bound_reports=[bound for report in reports for bound in report.bound_reports],
    )
    if config.out:
        write_report(merged, config.out)
    return EXIT_OK if merged.passed else EXIT_CHECK_FAILED


COMMANDS = {
    Subcommand.GENERATE: cmd_generate,
    Subcommand.COMPUTE: cmd_compute,
    Subcommand.VERIFY: cmd_verify,
    Subcommand.REPORT: cmd_report,
}


def run(argv: Optional[List[str]] = None) -> int:
    """Parse ``argv``, run one subcommand and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    try:
        config = RunConfig(**{key: value for key, value in vars(args).items() if value is not None})
        settings = effective_settings(config)
        configure_logging(settings.log_level)
        return COMMANDS[config.subcommand](config, settings)
    except Exception as e:
        diagnostic = handle_exception(e)
        print(json.dumps(diagnostic, sort_keys=True), file=sys.stderr)
        return diagnostic["exit_code"]


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
