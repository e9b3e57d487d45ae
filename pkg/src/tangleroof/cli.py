"""Command-line interface.

Subcommands: ``sweep`` (tangle over a (ratio, T, b) grid), ``optimal-field``
(maximize tangle over b), ``fit`` (log-log power-law fit of CSV columns),
``validate`` (closed-form oracle suite) and ``ground-state`` (spectrum and
ground-state report).  Exit codes: 0 success, 1 invalid config or input,
2 validation failure, 3 internal numerical error.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from contextlib import nullcontext
from dataclasses import replace

import numpy as np

from . import __version__
from .config import ConfigError, SweepConfig, load_config
from .convexroof import NoDecreaseError
from .experiments import (
    OPTIMAL_FIELD_COLUMNS,
    SWEEP_COLUMNS,
    VALIDATE_OPTIONS,
    VALIDATION_COLUMNS,
    family_summary,
    fit_power_law,
    ground_state_report,
    iter_optimal_field,
    iter_sweep,
    optimal_field_row,
    run_validation,
    sweep_row,
    validation_row,
)
from .linalg import InvalidStateError, NoConvergenceError
from .measures import NumericalInconsistencyError
from .spinring import SpinRingParams

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

_NUMERICAL_ERRORS = (
    NumericalInconsistencyError,
    NoConvergenceError,
    NoDecreaseError,
    InvalidStateError,
    np.linalg.LinAlgError,
)


class _Parser(argparse.ArgumentParser):
    """Argument errors exit 1; code 2 is reserved for validation failures."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _default_workers() -> int:
    return os.cpu_count() or 1


def _add_common(sub, config_required: bool):
    sub.add_argument(
        "--config", required=config_required, help="key=value configuration file"
    )
    sub.add_argument("--out", help="output path (default: stdout)")
    sub.add_argument("--seed", type=int, help="override the optimizer seed")
    sub.add_argument("--restarts", type=int, help="override the restart count")
    sub.add_argument(
        "--workers",
        type=int,
        default=_default_workers(),
        help="process pool size (default: available parallelism)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tangleroof", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"tangleroof {__version__}")
    subs = parser.add_subparsers(dest="command")

    sweep = subs.add_parser("sweep", parents=[], help="tangle over a (ratio, T, b) grid")
    _add_common(sweep, config_required=True)
    sweep.set_defaults(func=cmd_sweep)

    opt = subs.add_parser("optimal-field", help="maximize the tangle over b")
    _add_common(opt, config_required=True)
    opt.add_argument(
        "--b-rtol", type=float, default=1e-3, help="relative tolerance on b (default 1e-3)"
    )
    opt.set_defaults(func=cmd_optimal_field)

    fit = subs.add_parser("fit", help="power-law fit of CSV columns in log-log scale")
    fit.add_argument("--csv", required=True, help="input CSV with a header row")
    fit.add_argument("--x-column", default="temperature")
    fit.add_argument("--y-column", required=True)
    fit.add_argument("--out", help="optional one-row CSV with the fit parameters")
    fit.set_defaults(func=cmd_fit)

    val = subs.add_parser("validate", help="run the closed-form oracle suite")
    _add_common(val, config_required=False)
    val.set_defaults(func=cmd_validate)

    gs = subs.add_parser("ground-state", help="spectrum and ground-state report")
    _add_common(gs, config_required=True)
    gs.set_defaults(func=cmd_ground_state)
    return parser


def _load(args) -> SweepConfig:
    config = load_config(args.config) if args.config else SweepConfig()
    optimizer = config.optimizer
    if args.seed is not None:
        optimizer = replace(optimizer, seed=args.seed)
    if args.restarts is not None:
        optimizer = replace(optimizer, restarts=args.restarts)
    if optimizer is not config.optimizer:
        config = replace(config, optimizer=optimizer)
    if args.out:
        config = replace(config, output_path=args.out)
    return config


def _open_out(path: str | None):
    if path:
        return open(path, "w", encoding="utf-8", newline="\n")
    return nullcontext(sys.stdout)


def cmd_sweep(args) -> int:
    config = _load(args)
    if config.b_grid is None or config.t_grid is None:
        raise ConfigError("sweep needs both b_grid and t_grid")
    with _open_out(config.output_path) as fh:
        fh.write(",".join(SWEEP_COLUMNS) + "\n")
        fh.flush()
        for record in iter_sweep(config, workers=args.workers):
            fh.write(sweep_row(record) + "\n")
            fh.flush()
    return EXIT_OK


def cmd_optimal_field(args) -> int:
    config = _load(args)
    if config.b_window is None:
        raise ConfigError("optimal-field needs b_window")
    if config.t_grid is None and config.temperature <= 0.0:
        raise ConfigError("optimal-field needs t_grid or a positive temperature")
    with _open_out(config.output_path) as fh:
        fh.write(",".join(OPTIMAL_FIELD_COLUMNS) + "\n")
        fh.flush()
        for result in iter_optimal_field(config, workers=args.workers, b_rtol=args.b_rtol):
            fh.write(optimal_field_row(result) + "\n")
            fh.flush()
    return EXIT_OK


def cmd_fit(args) -> int:
    try:
        with open(args.csv, "r", encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            rows = list(reader)
    except OSError as exc:
        raise ConfigError(f"cannot read {args.csv!r}: {exc}") from exc
    if not rows:
        raise ConfigError(f"{args.csv!r} has no data rows")
    for column in (args.x_column, args.y_column):
        if column not in rows[0]:
            raise ConfigError(f"{args.csv!r} has no column {column!r}")
    try:
        x = [float(r[args.x_column]) for r in rows]
        y = [float(r[args.y_column]) for r in rows]
        fit = fit_power_law(x, y)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    print(f"n_points = {fit.n_points}")
    print(f"exponent = {fit.exponent:.17g}")
    print(f"prefactor = {fit.prefactor:.17g}")
    print(f"residual = {fit.residual:.17g}")
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("exponent,prefactor,residual,n_points\n")
            fh.write(
                f"{fit.exponent:.17g},{fit.prefactor:.17g},{fit.residual:.17g},{fit.n_points}\n"
            )
    return EXIT_OK


def cmd_validate(args) -> int:
    config = _load(args) if args.config else None
    opts = config.optimizer if config is not None else VALIDATE_OPTIONS
    if config is None:
        if args.seed is not None:
            opts = replace(opts, seed=args.seed)
        if args.restarts is not None:
            opts = replace(opts, restarts=args.restarts)
    rows = run_validation(opts, workers=args.workers)
    out_path = args.out if args.out else (config.output_path if config else None)
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(VALIDATION_COLUMNS) + "\n")
            for row in rows:
                fh.write(validation_row(row) + "\n")
    all_ok = True
    for family, worst, tolerance, ok in family_summary(rows):
        verdict = "PASS" if ok else "FAIL"
        print(f"{family}: max_abs_error = {worst:.3e} tolerance = {tolerance:.0e} {verdict}")
        all_ok = all_ok and ok
    print(f"validate: {'PASS' if all_ok else 'FAIL'}")
    return EXIT_OK if all_ok else EXIT_VALIDATION


def cmd_ground_state(args) -> int:
    config = _load(args)
    params = SpinRingParams(
        jxy=config.jxy,
        jz=config.jz,
        field=config.field,
        b=config.b,
        temperature=config.temperature,
    )
    report = ground_state_report(params)
    print(report)
    if config.output_path:
        with open(config.output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(report + "\n")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_help(sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"tangleroof: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except _NUMERICAL_ERRORS as exc:
        print(f"tangleroof: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"tangleroof: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"tangleroof: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
