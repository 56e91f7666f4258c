#!/usr/bin/env python3
"""Parameter sweeps

Evaluates every module on a grid of pump values, one row per point, and
writes the rows as CSV with a single '#' metadata line on top. Points can be
evaluated in worker processes; rows always come back in grid order.

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

from concurrent.futures import ProcessPoolExecutor
import csv
from dataclasses import dataclass, field
from enum import StrEnum
import functools
import logging
from typing import Any, Iterable, TextIO

import json5 as json
import numpy as np

from . import entangle
from . import errors
from . import params
from . import semiclassical
from . import series
from . import static
from . import utils

logger = logging.getLogger(__name__)


class Axis(StrEnum):
    """Which pump variable the grid runs over"""

    ES = "es"
    P = "p"


class SweepRow:
    """One evaluated grid point, backed by a dict of column values"""

    def __init__(self, data: dict[str, Any]):
        """One evaluated grid point.

    Args:
        data (dict[str, Any]): Column values. Missing columns are empty.
        """

        self._data = data

    def __getitem__(self, key: str):
        """Get a column value"""
        return self._data[key]

    def __repr__(self) -> str:
        """String to represent this object"""
        return f"{type(self).__name__}(es={self.get('es')!r}, error={self.error!r})"

    @property
    def get(self):
        """Get a column value with fallback"""
        return self._data.get

    @property
    def error(self) -> str | None:
        """Error class name if the point failed"""
        return self._data.get("error")

    @property
    def ok(self) -> bool:
        """Did the point evaluate?"""
        return self.error is None

    def cells(self, columns: Iterable[str]) -> list[str]:
        """Formatted cells for the given columns.

        Args:
            columns (Iterable[str]): Column names.

        Returns:
            Cells (list[str]): Round trip text per column.
        """

        return [utils.format_float(self._data.get(column)) for column in columns]


@dataclass(frozen=True)
class SweepSpec:
    """A grid of pump values over fixed rates"""

    base: params.NopoParams
    """Rates and pump phase, the pump amplitude is ignored"""

    axis: Axis = Axis.ES
    """Pump variable of the grid"""

    start: float = 0.0
    """First grid value"""

    stop: float = 30.0
    """Last grid value"""

    count: int = 301
    """Number of grid points"""

    columns: tuple[str, ...] = static.Output.sweep_columns
    """Columns to emit, in order"""

    tol: float = static.Series.tol
    """Series tolerance"""

    label: str = ""
    """Free text carried into the metadata line"""

    extra: dict[str, Any] = field(default_factory=dict, compare=False)
    """More metadata, such as the preset name"""

    def __post_init__(self):
        object.__setattr__(self, "axis", Axis(self.axis))
        object.__setattr__(self, "columns", tuple(self.columns))

        if not self.start < self.stop:
            raise errors.InvalidParams(f"Sweep start {self.start!r} must be below stop {self.stop!r}")

        if self.start < 0:
            raise errors.InvalidParams(f"Sweep start must be non-negative, got {self.start!r}")

        if not (isinstance(self.count, int) and 2 <= self.count <= static.Output.max_count):
            raise errors.InvalidParams(
                f"Sweep count must be an integer in [2, {static.Output.max_count}], got {self.count!r}")

        unknown = [c for c in self.columns if c not in static.Output.all_columns]
        if unknown:
            raise errors.InvalidParams(f"Unknown sweep columns: {', '.join(unknown)}")

    def grid(self) -> np.ndarray:
        """The grid values, ascending"""
        return np.linspace(self.start, self.stop, self.count)

    def metadata(self) -> dict[str, Any]:
        """Parameter echo for the '#' line"""

        derived = params.derive(self.base)
        data = {
            "kappa": self.base.kappa,
            "gamma": self.base.gamma,
            "gamma3": self.base.gamma3,
            "delta": self.base.delta,
            "delta3": self.base.delta3,
            "phi_e": self.base.pump_phase,
            "lambda_re": derived.lam.real,
            "lambda_im": derived.lam.imag,
            "regime": str(derived.regime),
            "p_mono": derived.thresholds.p_mono,
            "p_bistable_lower": derived.thresholds.p_bistable_lower,
            "es_threshold": derived.thresholds.es_threshold,
            "axis": str(self.axis),
            "start": self.start,
            "stop": self.stop,
            "count": self.count,
            "tol": self.tol,
            }
        if self.label:
            data["label"] = self.label
        data.update(self.extra)
        return data


def _pump_params(base: params.NopoParams, axis: Axis, value: float) -> params.NopoParams:
    if axis is Axis.ES:
        return params.NopoParams.from_es(value, **base.rates())
    return params.NopoParams.from_p(value, **base.rates())


def evaluate_point(base: params.NopoParams, axis: Axis, value: float, tol: float = static.Series.tol) -> SweepRow:
    """Evaluate every column at one grid point.

    Args:
        base (params.NopoParams): Rates and pump phase.
        axis (Axis): Pump variable.
        value (float): Its value.
        tol (float): Series tolerance.
            Defaults to static.Series.tol.

    Returns:
        Row (SweepRow): The row, with an error column instead of numbers on failure.
    """

    nopo = _pump_params(base, axis, value)
    derived = params.derive(nopo)
    row = {"es": derived.es, "p": derived.p, "regime": str(derived.regime)}

    try:
        moments = series.moments(derived.lam, derived.p, derived.phi_e, tol)
        result = entangle.minimized_variance(moments)
        point = semiclassical.semiclassical_point(derived.lam, derived.p, moments.stats)
    except errors.NopoError as e:
        logger.debug("Sweep point %s=%r failed: %s", axis, value, e)
        row["error"] = type(e).__name__
        return SweepRow(row)

    scale = nopo.kappa ** 2 / (nopo.gamma * nopo.gamma3)
    row.update({
        "n": moments.n,
        "n_cl": point.n_cl,
        "delta_n": point.delta_n,
        "v_min": result.v_min,
        "theta": result.theta_relative,
        "method": str(moments.stats.method),
        "tail_bound": moments.stats.tail_bound,
        "n_scaled": moments.n * scale,
        "pair_re": moments.pair_moment.real,
        "pair_im": moments.pair_moment.imag,
        "theta_sum": result.theta_sum,
        "entangled": result.entangled_sufficient,
        "p_dn_dp": moments.p_dn_dp,
        })
    return SweepRow(row)


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[SweepRow]:
    """Evaluate a sweep.

    Args:
        spec (SweepSpec): The sweep.
        workers (int): Worker processes, 1 for in-process evaluation.
            Defaults to 1.

    Returns:
        Rows (list[SweepRow]): One row per grid point, in grid order.
    """

    grid = [float(value) for value in spec.grid()]
    task = functools.partial(evaluate_point, spec.base, spec.axis, tol=spec.tol)

    if workers <= 1:
        rows = [task(value) for value in grid]
    else:
        # Executor.map keeps the input order
        chunksize = max(1, len(grid) // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(task, grid, chunksize=chunksize))

    failed = sum(not row.ok for row in rows)
    if failed:
        logger.warning("%d of %d sweep points failed", failed, len(rows))
    return rows


def write_csv(rows: Iterable[SweepRow], columns: Iterable[str], stream: TextIO, metadata: dict[str, Any] | None = None):
    """Write rows as CSV.

    Args:
        rows (Iterable[SweepRow]): The rows.
        columns (Iterable[str]): Columns to write, in order. An error column
            is appended if any row failed and it was not requested.
        stream (TextIO): Text stream to write to.
        metadata (dict[str, Any] | None): Written as one '#' line above the header.
            Defaults to None, no metadata line.
    """

    rows = list(rows)
    columns = list(columns)
    if "error" not in columns and any(not row.ok for row in rows):
        columns.append("error")

    if metadata is not None:
        stream.write(static.Output.metadata_prefix + json.dumps(metadata) + "\n")

    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(row.cells(columns))
