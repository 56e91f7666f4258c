#!/usr/bin/env python3
"""Nopomoments numerical utilities

This submodule provides compensated summation and small helpers for angles,
float formatting and config file parsing.

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

import math
from typing import Iterable

from . import errors
from . import static


def two_sum(a: float, b: float) -> tuple[float, float]:
    """Error free transformation of a sum.

    Args:
        a (float): First addend.
        b (float): Second addend.

    Returns:
        Sum (float): round(a + b).
        Error (float): The exact rounding error, so that a + b = sum + error.
    """

    s = a + b
    bp = s - a
    ap = s - bp
    return s, (a - ap) + (b - bp)


class CompensatedSum:
    """Running Neumaier sum of floats, with support for rescaling"""

    def __init__(self, value: float = 0.0):
        """Running Neumaier sum of floats.

    Args:
        value (float): Starting value.
            Defaults to 0.0.
        """

        self._s = float(value)
        self._c = 0.0

    def __repr__(self) -> str:
        """String to represent this object"""
        return f"{type(self).__name__}({self.value!r})"

    def add(self, value: float):
        """Add a value to the running sum.

        Args:
            value (float): The addend.
        """

        self._s, err = two_sum(self._s, float(value))
        self._c += err

    def extend(self, values: Iterable[float]):
        """Add several values, in the given order.

        Args:
            values (Iterable[float]): The addends.
        """

        for value in values:
            self.add(value)

    def scale(self, factor: float):
        """Multiply the running sum by a factor.

        Args:
            factor (float): The factor, usually exp(old_max - new_max).
        """

        self._s *= factor
        self._c *= factor

    @property
    def value(self) -> float:
        """The compensated sum"""
        return self._s + self._c

    @property
    def parts(self) -> tuple[float, float]:
        """The unnormalized (high, low) pair whose sum is the value"""
        return self._s, self._c


class ComplexCompensatedSum:
    """Running compensated sum of complex numbers, parts kept separately"""

    def __init__(self):
        """Running compensated sum of complex numbers"""
        self.real = CompensatedSum()
        self.imag = CompensatedSum()

    def add(self, value: complex):
        """Add a value to the running sum.

        Args:
            value (complex): The addend.
        """

        self.real.add(value.real)
        self.imag.add(value.imag)

    def scale(self, factor: float):
        """Multiply the running sum by a real factor.

        Args:
            factor (float): The factor.
        """

        self.real.scale(factor)
        self.imag.scale(factor)

    @property
    def value(self) -> complex:
        """The compensated sum"""
        return complex(self.real.value, self.imag.value)


def exact_sum(*values: float) -> float:
    """Correctly rounded sum of a few floats.

    Args:
        *values (float): The addends.

    Returns:
        Sum (float): The sum, correctly rounded.
    """

    return math.fsum(values)


def principal_angle(angle: float) -> float:
    """Wrap an angle into (-pi, pi].

    Args:
        angle (float): Angle in radians.

    Returns:
        Angle (float): The same angle, principal value.
    """

    wrapped = math.remainder(angle, math.tau)
    if wrapped == -math.pi:
        return math.pi
    return wrapped


def format_float(value: float | int | bool | str | None) -> str:
    """Format a value for a data file cell.

    Args:
        value (float | int | bool | str | None): The value.

    Returns:
        Cell (str): Round trip text, empty for None.
    """

    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return static.Output.float_format.format(value)
    return str(value)


def parse_config(text: str, source: str = "<config>") -> dict[str, str]:
    """Parse key = value lines.

    Args:
        text (str): The config file contents.
        source (str): Name used in error messages.
            Defaults to "<config>".

    Returns:
        Config (dict[str, str]): Keys normalized to underscores, values stripped.
    """

    config = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()

        # Blank or comment line
        if not line:
            continue

        if "=" not in line:
            raise errors.InvalidParams(
                f"{source}:{lineno}: expected key = value, got {raw!r}")

        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise errors.InvalidParams(f"{source}:{lineno}: empty key")

        config[key.lstrip("-").replace("-", "_")] = value

    return config
