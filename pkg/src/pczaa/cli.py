"""Command-line front end for pczaa."""

from __future__ import annotations

import argparse
import os
import sys
from collections.abc import Callable
from pathlib import Path

import numpy as np
import structlog

from .constants import APP_NAME, DEBUG_ENV_VAR
from .exceptions import ConfigurationError, ContractViolationError, PczaaError
from .models.config import ConvMode, DepcaMode, RunConfig, Subcommand
from .models.depca import DepcaSolution, DepcaSystem
from .models.grid import GridFunction
from .models.kernel import HeatKernel, Kernel, exponential_kernel
from .services.coefficients import parse_coefficient, parse_kernel
from .services.demo import DemoRunner
from .services.depca import bounded_solution, lasota_wazewska, solve_ivp
from .services.diagnostics import classify_kaa
from .services.extension import ExtensionKind, extend
from .services.transforms import (
    conv_causal,
    conv_full_line,
    conv_halfline_asymptotic,
    heat_solve,
)
from .storage.artifacts import ArtifactWriter, read_grid_csv, read_sequence_csv
from .storage.logging import configure_logging

__all__ = ["main"]

DEMO_COLUMNS = ["name", "expected", "observed", "tolerance", "passed"]
"""Columns of ``demo-summary.csv``."""


def _parser() -> argparse.ArgumentParser:
    suppress = argparse.SUPPRESS
    common = argparse.ArgumentParser(add_help=False, argument_default=suppress)
    common.add_argument("--out-dir", type=Path, help="Artifact directory")
    common.add_argument(
        "--precision", type=int, help="Significant digits in CSV output"
    )
    common.add_argument(
        "--seed", type=lambda s: int(s, 0), help="Seed for noise fixtures"
    )
    common.add_argument("--config", type=Path, help="JSON run configuration")
    common.add_argument(
        "--debug", action="store_true", help="Verbose console logging"
    )
    common.add_argument(
        "-M", "--samples-per-unit", type=int, help="Lattice points per unit"
    )
    common.add_argument(
        "--window", type=int, nargs=2, metavar=("LO", "HI"), help="Window"
    )

    parser = argparse.ArgumentParser(
        prog=APP_NAME,
        description="Numerics for piecewise-continuous almost automorphy",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, text: str) -> argparse.ArgumentParser:
        return sub.add_parser(
            name, parents=[common], argument_default=suppress, help=text
        )

    cmd = add("extend", "Extend an integer sequence to the line")
    cmd.add_argument("--in", dest="input", type=Path, required=True)
    cmd.add_argument("--kind", choices=[k.value for k in ExtensionKind])
    cmd.add_argument("--midpoint", help="Expression sampled at n + 1/2")

    cmd = add("diagnose", "Recurrence and continuity diagnostics")
    cmd.add_argument("--in", dest="input", type=Path, required=True)
    cmd.add_argument("--eps", type=float)
    cmd.add_argument("--max-shift", type=int)

    cmd = add("conv", "Convolve with an integrable kernel")
    cmd.add_argument("--in", dest="input", type=Path, required=True)
    cmd.add_argument(
        "--mode", dest="conv_mode", choices=[m.value for m in ConvMode]
    )
    cmd.add_argument("--kernel", help="gauss:t or exp[:rate]")
    cmd.add_argument("--trunc-eps", type=float)

    cmd = add("heat", "Solve the heat equation on the line")
    cmd.add_argument("--in", dest="input", type=Path, required=True)
    cmd.add_argument("--kernel", help="gauss:t, with t the diffusion time")
    cmd.add_argument("--trunc-eps", type=float)

    cmd = add("depca", "Solve a scalar DEPCA")
    cmd.add_argument(
        "--mode", dest="depca_mode", choices=[m.value for m in DepcaMode]
    )
    for flag in ("--a", "--b", "--f", "--delta", "--p"):
        cmd.add_argument(flag, help="Coefficient expression")
    cmd.add_argument("--y0", type=float)
    cmd.add_argument("--steps", type=int)
    cmd.add_argument("--gamma", type=float)
    cmd.add_argument("--max-iter", type=int)
    cmd.add_argument("--tol", type=float)
    cmd.add_argument("--trunc-eps", type=float)

    add("demo", "Check every worked example")
    return parser


def _kernel(text: str) -> Kernel:
    name, parameter = parse_kernel(text)
    if name == "gauss":
        return HeatKernel(parameter).kernel()
    return exponential_kernel(parameter)


def _input(config: RunConfig) -> Path:
    if config.input is None:
        raise ConfigurationError(f"{config.command} needs --in")
    return config.input


def _run_extend(config: RunConfig, writer: ArtifactWriter) -> None:
    sequence = read_sequence_csv(_input(config))
    midpoint: Callable[[np.ndarray], np.ndarray] | None = None
    if config.midpoint is not None:
        rule = parse_coefficient(config.midpoint)

        def shifted(n: np.ndarray) -> np.ndarray:
            return rule(n + 0.5)

        midpoint = shifted
    window = config.window if "window" in config.model_fields_set else None
    m = config.samples_per_unit
    f = extend(sequence, config.kind, m, window, midpoint)
    print(writer.grid("extend.csv", f))


def _run_diagnose(config: RunConfig, writer: ArtifactWriter) -> None:
    f = read_grid_csv(_input(config))
    report = classify_kaa(f, config.eps, config.max_shift)
    writer.json(
        "diagnose.json", {"norm": f.norm_report(), "classification": report}
    )
    print(report.verdict.value)


def _run_conv(config: RunConfig, writer: ArtifactWriter) -> None:
    f = read_grid_csv(_input(config))
    kernel = _kernel(config.kernel)
    operators: dict[ConvMode, Callable[..., GridFunction]] = {
        ConvMode.FULL: conv_full_line,
        ConvMode.CAUSAL: conv_causal,
        ConvMode.HALFLINE: conv_halfline_asymptotic,
    }
    out = operators[config.conv_mode](kernel, f, config.trunc_eps)
    print(writer.grid("conv.csv", out))


def _run_heat(config: RunConfig, writer: ArtifactWriter) -> None:
    name, t = parse_kernel(config.kernel)
    if name != "gauss":
        raise ConfigurationError("heat needs --kernel gauss:t")
    u = heat_solve(read_grid_csv(_input(config)), t, config.trunc_eps)
    print(writer.grid("heat.csv", u))


def _run_depca(config: RunConfig, writer: ArtifactWriter) -> None:
    solution: DepcaSolution
    if config.depca_mode is DepcaMode.LW:
        solution = lasota_wazewska(
            parse_coefficient(config.delta),
            parse_coefficient(config.p),
            config.gamma,
            config.window,
            config.steps,
            max_iter=config.max_iter,
            tol=config.tol,
            trunc_eps=config.trunc_eps,
        )
    else:
        system = DepcaSystem(
            1,
            parse_coefficient(config.a),
            parse_coefficient(config.b),
            parse_coefficient(config.f),
        )
        if config.depca_mode is DepcaMode.IVP:
            solution = solve_ivp(
                system, np.array([config.y0]), config.window, config.steps
            )
        else:
            solution = bounded_solution(
                system, config.window, config.steps, config.trunc_eps
            )
    print(writer.grid("depca.csv", solution.trajectory))
    print(writer.json("depca-report.json", solution.report))


def _run_demo(
    config: RunConfig, writer: ArtifactWriter, logger: structlog.BoundLogger
) -> None:
    runner = DemoRunner(
        samples_per_unit=config.samples_per_unit,
        steps=config.steps,
        seed=config.seed,
        logger=logger,
    )
    rows = runner.go()
    writer.table(
        "demo-summary.csv",
        DEMO_COLUMNS,
        (
            [r.name, r.expected, r.observed, r.tolerance, r.passed]
            for r in rows
        ),
    )
    writer.json("demo-summary.json", {"rows": rows})
    for row in rows:
        print(f"{'PASS' if row.passed else 'FAIL'} {row.name}")
    failed = [r.name for r in rows if not r.passed]
    if failed:
        raise ContractViolationError(
            f"{len(failed)} demo checks failed: {', '.join(failed)}"
        )


def run(config: RunConfig, logger: structlog.BoundLogger) -> None:
    """Execute one validated invocation."""
    writer = ArtifactWriter(
        config.out_dir, precision=config.precision, logger=logger
    )
    match config.command:
        case Subcommand.EXTEND:
            _run_extend(config, writer)
        case Subcommand.DIAGNOSE:
            _run_diagnose(config, writer)
        case Subcommand.CONV:
            _run_conv(config, writer)
        case Subcommand.HEAT:
            _run_heat(config, writer)
        case Subcommand.DEPCA:
            _run_depca(config, writer)
        case Subcommand.DEMO:
            _run_demo(config, writer, logger)


def main(argv: list[str] | None = None) -> int:
    """Parse arguments, run the subcommand and return the exit status.

    Validation failures exit with 2 and numerical-contract failures with
    3, as do argument errors reported by argparse (2).
    """
    try:
        args = vars(_parser().parse_args(argv))
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    config_path = args.pop("config", None)
    debug = bool(args.get("debug")) or bool(os.environ.get(DEBUG_ENV_VAR))
    configure_logging(debug=debug)
    logger = structlog.get_logger(APP_NAME)
    try:
        if config_path is None:
            config = RunConfig.build(**args)
        else:
            config = RunConfig.from_config(config_path, **args)
        if config.debug and not debug:
            configure_logging(debug=True)
        run(config, logger)
    except PczaaError as e:
        logger.error(
            "Command failed",
            command=args["command"],
            error=str(e),
            exit_code=e.exit_code,
        )
        print(f"{APP_NAME}: {e}", file=sys.stderr)
        return e.exit_code
    return 0
