#!/usr/bin/env python3
"""Nopomoments command line tool

Subcommands:
    point          Report every quantity at one parameter point.
    sweep          Evaluate a grid of pump values and write CSV.
    figure         Reproduce the data of a figure preset, one CSV per curve.
    oracle-check   Compare the series with the master equation oracle.
    audit          Measure the far above and near threshold constants.

Exit codes: 0 success, 2 invalid input, 3 nonconvergence, 4 oracle check failure.

Copyright 2025 Wilbur Jaywright.

This file is part of Nopomoments.

Nopomoments is free software: you can redistribute it and/or modify it under
the terms of the GNU Lesser General Public License as published by the Free
Software Foundation, either version 3 of the License, or (at your option) any
later version.

Nopomoments is distributed in the hope that it will be useful, but WITHOUT ANY
WARRANTY; without even the implied warranty of MERCHANTABILITY or FITNESS FOR A
PARTICULAR PURPOSE. See the GNU Lesser General Public License for more details.

You should have received a copy of the GNU Lesser General Public License along
with Nopomoments. If not, see <https://www.gnu.org/licenses/>.

S.D.G."""

from __future__ import annotations

import argparse
import contextlib
import csv
import importlib.resources
import logging
import os
import sys
from typing import Any, Sequence, TextIO
import warnings

import json5 as json

from . import errors
from . import oracle
from . import params
from . import reports
from . import static
from . import sweep
from . import utils

logger = logging.getLogger(__name__)

FLOAT_KEYS = (
    "kappa", "gamma", "gamma3", "delta", "delta3", "es", "p", "phi_e", "tol",
    "solver_tol", "start", "stop",
    )
"""Config keys holding floats"""

INT_KEYS = ("cutoff", "count", "workers", "max_cutoff_scan")
"""Config keys holding integers"""

STR_KEYS = ("axis", "columns", "method", "label")
"""Config keys holding text"""

DEFAULTS = {
    "gamma": 1.0,
    "delta": 0.0,
    "phi_e": 0.0,
    "tol": static.Series.tol,
    "cutoff": static.Oracle.cutoff,
    "solver_tol": static.Oracle.solver_tol,
    "max_cutoff_scan": static.Oracle.max_cutoff_scan,
    "method": str(oracle.Method.NULL_SPACE),
    "axis": str(sweep.Axis.ES),
    "start": 0.0,
    "stop": 30.0,
    "count": 301,
    "workers": 1,
    }
"""Values used when neither a flag nor the config file sets a key"""


def _add_rate_flags(parser: argparse.ArgumentParser):
    group = parser.add_argument_group("rates")
    group.add_argument("--kappa", type=float, help="Coupling constant kappa")
    group.add_argument("--gamma", type=float, help="Subharmonic decay rate (default 1)")
    group.add_argument("--gamma3", type=float, help="Pump mode decay rate")
    group.add_argument("--delta", type=float, help="Subharmonic detuning (default 0)")
    group.add_argument("--delta3", type=float, help="Pump detuning (default 2*delta, or 0 for oracle-check)")
    group.add_argument("--phi-e", dest="phi_e", type=float, help="Pump phase in radians (default 0)")
    parser.add_argument("--tol", type=float, help="Series tolerance (default 1e-12)")
    parser.add_argument("--config", help="key = value file with defaults for these flags")
    parser.add_argument("--output", help="Output file (default stdout)")


def _add_pump_flags(parser: argparse.ArgumentParser):
    pump = parser.add_mutually_exclusive_group()
    pump.add_argument("--es", type=float, help="Dimensionless pump amplitude E_s")
    pump.add_argument("--p", type=float, help="Scaled pump intensity p")


def _add_oracle_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--cutoff", type=int, help=f"Starting Fock cutoff (default {static.Oracle.cutoff})")
    parser.add_argument("--solver-tol", dest="solver_tol", type=float, help="Steady state residual tolerance")
    parser.add_argument("--max-cutoff-scan", dest="max_cutoff_scan", type=int, help="Cutoff ceiling")
    parser.add_argument("--method", choices=[str(m) for m in oracle.Method], help="Steady state method")
    parser.add_argument(
        "--flip-pump-sign", dest="flip_pump_sign", action="store_true",
        help="Negate the pair drive, a negative control that must fail",
        )


def _add_grid_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--axis", choices=[str(a) for a in sweep.Axis], help="Grid variable (default es)")
    parser.add_argument("--start", type=float, help="First grid value (default 0)")
    parser.add_argument("--stop", type=float, help="Last grid value (default 30)")
    parser.add_argument("--count", type=int, help="Grid points (default 301)")
    parser.add_argument("--columns", help="Comma separated columns to emit")
    parser.add_argument("--workers", type=int, help="Worker processes (default 1)")


def build_parser() -> argparse.ArgumentParser:
    """The argument parser of the tool"""

    parser = argparse.ArgumentParser(
        prog="nopomoments",
        description="Exact steady state moments and two-mode squeezing of a nondegenerate parametric oscillator",
        )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logging")
    subparsers = parser.add_subparsers(dest="command", required=True)

    point = subparsers.add_parser("point", help="Report one parameter point")
    _add_rate_flags(point)
    _add_pump_flags(point)

    grid = subparsers.add_parser("sweep", help="Sweep the pump and write CSV")
    _add_rate_flags(grid)
    _add_grid_flags(grid)

    figure = subparsers.add_parser("figure", help="Write the data of a figure preset")
    figure.add_argument("name", choices=sorted(static.Presets.figures), help="Figure preset")
    figure.add_argument("--output-dir", dest="output_dir", default=".", help="Directory for the CSV files")
    figure.add_argument("--count", type=int, help="Override the grid size of the preset")
    figure.add_argument("--workers", type=int, help="Worker processes (default 1)")
    figure.add_argument("--tol", type=float, help="Series tolerance (default 1e-12)")

    check = subparsers.add_parser("oracle-check", help="Compare the series with the master equation oracle")
    _add_rate_flags(check)
    _add_pump_flags(check)
    _add_oracle_flags(check)

    audit = subparsers.add_parser("audit", help="Measure the asymptotic and near threshold constants")
    _add_rate_flags(audit)

    return parser


def _coerce(key: str, value: str, source: str) -> Any:
    try:
        if key in FLOAT_KEYS:
            return float(value)
        if key in INT_KEYS:
            return int(value)
    except ValueError as e:
        raise errors.InvalidParams(f"{source}: {key} = {value!r} is not a number") from e

    if key in STR_KEYS:
        return value
    raise errors.InvalidParams(f"{source}: unknown key {key!r}")


def load_config(text: str, source: str = "<config>") -> dict[str, Any]:
    """Parse and type a config file.

    Args:
        text (str): File contents.
        source (str): Name for error messages.
            Defaults to "<config>".

    Returns:
        Config (dict[str, Any]): Typed values.
    """

    return {key: _coerce(key, value, source) for key, value in utils.parse_config(text, source).items()}


def load_preset(filename: str) -> dict[str, Any]:
    """Load a shipped figure preset.

    Args:
        filename (str): Preset file name.

    Returns:
        Config (dict[str, Any]): Typed values.
    """

    resource = importlib.resources.files(static.Presets.package).joinpath(filename)
    text = resource.read_text(encoding=static.Output.text_encoding)
    logger.info("Loaded preset %s", filename)
    return load_config(text, filename)


def _settings(args: argparse.Namespace) -> dict[str, Any]:
    """Merge flags over the config file over the defaults"""

    settings = dict(DEFAULTS)
    if getattr(args, "config", None):
        with open(args.config, encoding=static.Output.text_encoding) as f:
            settings.update(load_config(f.read(), args.config))

    for key, value in vars(args).items():
        if value is not None and key not in ("command", "config", "verbose"):
            settings[key] = value

    # A pump given in the config gives way to the other one given as a flag
    if getattr(args, "es", None) is not None:
        settings.pop("p", None)
    elif getattr(args, "p", None) is not None:
        settings.pop("es", None)

    return settings


def _rates(settings: dict[str, Any], pump_detuned: bool = True) -> dict[str, float]:
    for key in ("kappa", "gamma3"):
        if settings.get(key) is None:
            raise errors.InvalidParams(f"{key} is required, as a flag or in the config file")

    delta3 = settings.get("delta3")
    if delta3 is None:
        if pump_detuned:
            delta3 = 2 * settings["delta"]
            if settings["delta"] != 0:
                notice = f"delta3 not given, using the delta3 = 2*delta convention: delta3 = {delta3:g}"
                print(f"notice: {notice}", file=sys.stderr)
                warnings.warn(notice, errors.NopoWarning, stacklevel=2)
        else:
            delta3 = 0.0

    return {
        "kappa": settings["kappa"],
        "gamma": settings["gamma"],
        "gamma3": settings["gamma3"],
        "delta": settings["delta"],
        "delta3": delta3,
        "pump_phase": settings["phi_e"],
        }


def _point_params(settings: dict[str, Any], pump_detuned: bool = True) -> params.NopoParams:
    rates = _rates(settings, pump_detuned)
    if settings.get("es") is not None:
        return params.NopoParams.from_es(settings["es"], **rates)
    if settings.get("p") is not None:
        return params.NopoParams.from_p(settings["p"], **rates)
    raise errors.InvalidParams("One of es or p is required")


def _open_output(path: str | None) -> contextlib.AbstractContextManager[TextIO]:
    if path is None:
        return contextlib.nullcontext(sys.stdout)
    return open(path, "w", encoding=static.Output.text_encoding, newline="")


def _write_mapping(mapping: dict[str, Any], stream: TextIO):
    for key, value in mapping.items():
        stream.write(f"{key} = {utils.format_float(value)}\n")


def _write_table(rows: list[dict[str, Any]], stream: TextIO, summary: dict[str, Any]):
    stream.write(static.Output.metadata_prefix + json.dumps(summary) + "\n")
    if not rows:
        return
    writer = csv.writer(stream, lineterminator="\n")
    columns = list(rows[0])
    writer.writerow(columns)
    for row in rows:
        writer.writerow([utils.format_float(row[c]) for c in columns])


def _sweep_spec(settings: dict[str, Any], label: str = "", extra: dict[str, Any] | None = None) -> sweep.SweepSpec:
    base = params.NopoParams(**_rates(settings))
    columns = settings.get("columns")
    if isinstance(columns, str):
        columns = tuple(c.strip() for c in columns.split(",") if c.strip())

    extra = dict(extra or {})
    if settings.get("delta3") is None and base.delta != 0:
        extra["delta3_convention"] = "2*delta"

    return sweep.SweepSpec(
        base=base,
        axis=settings["axis"],
        start=settings["start"],
        stop=settings["stop"],
        count=settings["count"],
        columns=columns or static.Output.sweep_columns,
        tol=settings["tol"],
        label=label or settings.get("label", ""),
        extra=extra,
        )


def _run_sweep(spec: sweep.SweepSpec, workers: int, stream: TextIO) -> int:
    rows = sweep.run_sweep(spec, workers)
    sweep.write_csv(rows, spec.columns, stream, spec.metadata())
    return 0


def cmd_point(args: argparse.Namespace) -> int:
    """Run the point subcommand"""

    settings = _settings(args)
    report = reports.point_report(_point_params(settings), settings["tol"])
    with _open_output(settings.get("output")) as stream:
        _write_mapping(report, stream)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    """Run the sweep subcommand"""

    settings = _settings(args)
    spec = _sweep_spec(settings)
    with _open_output(settings.get("output")) as stream:
        return _run_sweep(spec, settings["workers"], stream)


def cmd_figure(args: argparse.Namespace) -> int:
    """Run the figure subcommand"""

    os.makedirs(args.output_dir, exist_ok=True)
    for filename in static.Presets.figures[args.name]:
        settings = dict(DEFAULTS)
        settings.update(load_preset(filename))
        for key in ("count", "tol", "workers"):
            if getattr(args, key) is not None:
                settings[key] = getattr(args, key)

        name = filename.rsplit(".", 1)[0]
        spec = _sweep_spec(settings, label=name, extra={"preset": args.name})
        path = os.path.join(args.output_dir, name + ".csv")
        logger.info("Writing %s", path)
        with open(path, "w", encoding=static.Output.text_encoding, newline="") as stream:
            _run_sweep(spec, settings["workers"], stream)

    return 0


def cmd_oracle_check(args: argparse.Namespace) -> int:
    """Run the oracle-check subcommand"""

    settings = _settings(args)
    nopo = _point_params(settings, pump_detuned=False)
    config = oracle.OracleConfig(
        cutoff=settings["cutoff"],
        solver_tol=settings["solver_tol"],
        max_cutoff_scan=max(settings["max_cutoff_scan"], settings["cutoff"]),
        method=settings["method"],
        flip_pump_sign=bool(settings.get("flip_pump_sign")),
        )
    report = reports.oracle_check(nopo, config, settings["tol"])

    with _open_output(settings.get("output")) as stream:
        _write_table(report["rows"], stream, report["summary"])

    if not report["summary"]["passed"]:
        failed = [row["quantity"] for row in report["rows"] if not row["passed"]]
        raise errors.OracleMismatch(f"Series and oracle disagree on {', '.join(failed)}")
    return 0


def cmd_audit(args: argparse.Namespace) -> int:
    """Run the audit subcommand"""

    settings = _settings(args)
    nopo = params.NopoParams(**_rates(settings))
    report = reports.audit(nopo, settings["tol"])
    summary = {"measured": report["summary"], "published": report["published"]}
    with _open_output(settings.get("output")) as stream:
        _write_table(report["rows"], stream, summary)
    return 0


COMMANDS = {
    "point": cmd_point,
    "sweep": cmd_sweep,
    "figure": cmd_figure,
    "oracle-check": cmd_oracle_check,
    "audit": cmd_audit,
    }
"""Subcommand handlers"""


def main(argv: Sequence[str] | None = None) -> int:
    """Run the tool.

    Args:
        argv (Sequence[str] | None): Arguments without the program name.
            Defaults to None, use sys.argv.

    Returns:
        Code (int): Process exit code.
    """

    args = build_parser().parse_args(argv)
    level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)]
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")

    try:
        return COMMANDS[args.command](args)
    except errors.NopoError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return errors.InvalidParams.exit_code


if __name__ == "__main__":
    sys.exit(main())
