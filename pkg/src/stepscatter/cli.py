"""Command line interface: times, figure, evolve and validate subcommands.

Reports are written as CSV (17 significant digits, '.' decimal separator,
comma delimiter, unit-tagged header row, '#'-prefixed meta and footer lines)
or as JSON mirroring the same field names.  Identical configurations produce
byte-identical files regardless of thread count.

Exit codes: 0 success, 1 validation failure, 2 config error, 3 numerical
failure, 4 spectral guard violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import ConfigError, SpectralGuardError, StepScatterError
from .reports import Report, build_figure, build_times, run_evolution
from .runconfig import build_config
from .validation import run_validation

_FLAG_TO_FIELD = {
    "v0": "v0",
    "a": "a",
    "hbar": "hbar",
    "mass": "mass",
    "k": "k",
    "kmin": "k_min",
    "kmax": "k_max",
    "kcount": "k_count",
    "kscale": "k_scale",
    "l0": "l0",
    "kbar": "k_bar",
    "window_sigmas": "window_sigmas",
    "nodes": "nodes",
    "xmin": "x_min",
    "xmax": "x_max",
    "npoints": "n_points",
    "tmin": "t_min",
    "tmax": "t_max",
    "tcount": "t_count",
    "interval_l": "interval_l",
    "output": "output",
    "format": "format",
}


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=str, default=None, help="config file path")
    parser.add_argument("--output", type=str, default=None, help="output file path (default stdout)")
    parser.add_argument("--format", type=str, choices=("csv", "json"), default=None)
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads, 0 = auto (env STEPSCATTER_THREADS as fallback)")
    parser.add_argument("--v0", type=float, default=None, help="step height (nonzero, either sign)")
    parser.add_argument("--a", type=float, default=None, help="step position (> 0)")
    parser.add_argument("--hbar", type=float, default=None)
    parser.add_argument("--mass", type=float, default=None)
    parser.add_argument("--k", type=float, default=None, help="single wavenumber (overrides the k grid)")
    parser.add_argument("--kmin", type=float, default=None)
    parser.add_argument("--kmax", type=float, default=None)
    parser.add_argument("--kcount", type=int, default=None)
    parser.add_argument("--kscale", type=str, choices=("linear", "log"), default=None)
    parser.add_argument("--l0", type=float, default=None, help="packet width parameter")
    parser.add_argument("--kbar", type=float, default=None, help="packet central wavenumber")
    parser.add_argument("--window-sigmas", dest="window_sigmas", type=float, default=None)
    parser.add_argument("--nodes", type=int, default=None, help="spectral quadrature nodes")
    parser.add_argument("--xmin", type=float, default=None)
    parser.add_argument("--xmax", type=float, default=None)
    parser.add_argument("--npoints", type=int, default=None)
    parser.add_argument("--tmin", type=float, default=None)
    parser.add_argument("--tmax", type=float, default=None)
    parser.add_argument("--tcount", type=int, default=None)
    parser.add_argument("--interval-l", dest="interval_l", type=float, default=None,
                        help="observation interval length L (default: a)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stepscatter",
        description="Characteristic times for scattering on a 1D potential step",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("times", "characteristic times per wavenumber"),
        ("evolve", "time-dependent packet norms, moments and stage fits"),
        ("validate", "run the property suite and report pass/fail"),
    ):
        _add_common_flags(sub.add_parser(name, help=text))
    fig = sub.add_parser("figure", help="plot-ready figure datasets")
    fig.add_argument("which", choices=("fig1", "fig2", "fig3", "fig4"))
    _add_common_flags(fig)
    return parser


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def render_csv(report: Report) -> str:
    lines = [f"# stepscatter {report.command}"]
    for key, value in report.meta.items():
        lines.append(f"# {key} = {value}")
    lines.append(",".join(report.columns))
    for row in report.rows:
        lines.append(",".join(_format_cell(v) for v in row))
    for key, value in report.footer.items():
        lines.append(f"# footer.{key} = {_format_cell(value)}")
    return "\n".join(lines) + "\n"


def render_json(report: Report) -> str:
    payload = {
        "command": report.command,
        "meta": report.meta,
        "columns": report.columns,
        "rows": report.rows,
        "footer": report.footer,
    }
    return json.dumps(payload, indent=2) + "\n"


def _emit(report: Report, fmt: str, output: str | None) -> None:
    text = render_csv(report) if fmt == "csv" else render_json(report)
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def _resolve_threads(flag: int | None, config_threads: int) -> int:
    if flag is not None:
        threads = flag
    else:
        env = os.environ.get("STEPSCATTER_THREADS")
        if env is not None:
            try:
                threads = int(env)
            except ValueError:
                raise ConfigError(f"STEPSCATTER_THREADS must be an integer, got {env!r}")
        else:
            threads = config_threads
    if threads < 0:
        raise ConfigError(f"threads must be >= 0, got {threads}")
    return threads if threads > 0 else (os.cpu_count() or 1)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        overrides = {
            field: getattr(args, flag)
            for flag, field in _FLAG_TO_FIELD.items()
            if getattr(args, flag) is not None
        }
        config = build_config(args.config, overrides)
        threads = _resolve_threads(args.threads, config.threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    try:
        if args.command == "times":
            _emit(build_times(config), config.format, config.output)
        elif args.command == "figure":
            _emit(build_figure(config, args.which), config.format, config.output)
        elif args.command == "evolve":
            _emit(run_evolution(config, threads), config.format, config.output)
        elif args.command == "validate":
            report, all_passed = run_validation(config, threads)
            for name, criterion, measured, result in report.rows:
                print(f"{name:35s} {criterion:>9s}  measured={measured:.3e}  {result}")
            if config.output is not None:
                _emit(report, config.format, config.output)
            return 0 if all_passed else 1
    except SpectralGuardError as exc:
        print(f"spectral guard: {exc}", file=sys.stderr)
        return 4
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except StepScatterError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


def entry() -> None:
    sys.exit(main())
