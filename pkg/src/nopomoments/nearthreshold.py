#!/usr/bin/env python3
"""Near threshold closed form of the minimized variance

Monostable operation only. With s = |Lambda|^(-1/2) and
c = sqrt(cos(arg Lambda)), the minimized variance near threshold is
V_min = 0.5 + c^3 f1(c) s + (f2(c) / s) ((I - I_min) / I_th)^2 with
I_min = I_th (1 + f3(c) s). Only a lower bound of f1 is published, so f1 is
calibrated from the exact series when needed.

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

import cmath
from dataclasses import dataclass
from enum import StrEnum
import logging
import math
import warnings

import numpy as np
from scipy import optimize

from . import errors
from . import params
from . import series
from . import static

logger = logging.getLogger(__name__)


class Invalidity(StrEnum):
    """Why the closed form does not apply"""

    NOT_MONOSTABLE = "NotMonostable"
    NEAR_INTERJACENT = "NearInterjacent"
    OUTSIDE_WINDOW = "OutsideWindow"


@dataclass(frozen=True)
class Validity:
    """Result of the validity check"""

    valid: bool
    """Does the closed form apply?"""

    reason: Invalidity | None = None
    """Why not, None when valid"""

    def __bool__(self) -> bool:
        return self.valid


@dataclass(frozen=True)
class NearThresholdParams:
    """Expansion parameters of one Lambda and pump"""

    s: float
    """|Lambda|^(-1/2)"""

    c: float
    """sqrt(cos(arg Lambda))"""

    i_over_ith: float
    """I / I_th = p / |Lambda|^2"""

    f2: float
    """Curvature coefficient f2(c)"""

    f3: float
    """Location coefficient f3(c)"""

    f1_lower_bound: float = static.NearThreshold.f1_lower_bound
    """Published lower bound of f1(c)"""

    @property
    def i_min_over_ith(self) -> float:
        """Predicted location of the minimum, 1 + f3 s"""
        return 1 + self.f3 * self.s


@dataclass(frozen=True)
class SeriesMinimum:
    """Minimum of the exact series V_min over the pump intensity"""

    i_over_ith: float
    """Location in I / I_th"""

    v_min: float
    """Minimized variance there"""

    @property
    def offset(self) -> float:
        """v_min - 0.5"""
        return self.v_min - 0.5


def _polynomial(coefficients: tuple[float, ...], c: float) -> float:
    return float(np.polynomial.polynomial.polyval(c, coefficients))


def f_polynomials(c: float) -> tuple[float, float]:
    """The published f2 and f3 polynomials.

    Args:
        c (float): sqrt(cos(arg Lambda)), in [0, 1].

    Returns:
        f2 (float): Curvature coefficient.
        f3 (float): Location coefficient.
    """

    if not 0 <= c <= 1:
        raise errors.DomainError(f"c must be in [0, 1], got {c!r}")

    return (
        _polynomial(static.NearThreshold.f2_coefficients, c),
        _polynomial(static.NearThreshold.f3_coefficients, c),
        )


def _require_monostable(lam: complex):
    regime = params.classify_regime(lam)
    if regime is not params.Regime.MONOSTABLE:
        raise errors.DomainError(f"The near threshold closed form needs monostable Lambda, got {regime}")


def expansion_params(lam: complex, i_over_ith: float = 1.0) -> NearThresholdParams:
    """Expansion parameters of a monostable Lambda.

    Args:
        lam (complex): Lambda.
        i_over_ith (float): Pump intensity relative to threshold.
            Defaults to 1.0.

    Returns:
        Params (NearThresholdParams): s, c and the polynomial values.
    """

    lam = complex(lam)
    _require_monostable(lam)
    c = math.sqrt(math.cos(cmath.phase(lam)))
    f2, f3 = f_polynomials(min(c, 1.0))
    return NearThresholdParams(s=abs(lam) ** -0.5, c=c, i_over_ith=i_over_ith, f2=f2, f3=f3)


def predicted_minimum_location(lam: complex) -> float:
    """Predicted pump intensity of maximal two-mode squeezing.

    Args:
        lam (complex): Lambda, monostable.

    Returns:
        Location (float): I_min / I_th = 1 + f3(c) s.
    """

    return expansion_params(lam).i_min_over_ith


def validity_check(lam: complex, i_over_ith: float) -> Validity:
    """Is the closed form valid at this point?

    Requires c^5 >= 10 s and |I - I_min| / I_th <= s^2 / 10.

    Args:
        lam (complex): Lambda.
        i_over_ith (float): Pump intensity relative to threshold.

    Returns:
        Validity (Validity): Valid, or the reason it is not.
    """

    lam = complex(lam)
    regime = params.classify_regime(lam)
    if regime is params.Regime.INTERJACENT:
        return Validity(False, Invalidity.NEAR_INTERJACENT)
    if regime is not params.Regime.MONOSTABLE:
        return Validity(False, Invalidity.NOT_MONOSTABLE)

    expansion = expansion_params(lam, i_over_ith)
    factor = static.NearThreshold.much_greater
    if expansion.c ** 5 < factor * expansion.s:
        return Validity(False, Invalidity.NEAR_INTERJACENT)

    if abs(i_over_ith - expansion.i_min_over_ith) > expansion.s ** 2 / factor:
        return Validity(False, Invalidity.OUTSIDE_WINDOW)

    return Validity(True)


def near_threshold_v_min(lam: complex, i_over_ith: float, f1: float | None = None) -> float:
    """Closed form minimized variance near threshold.

    Args:
        lam (complex): Lambda, monostable.
        i_over_ith (float): Pump intensity relative to threshold.
        f1 (float | None): Offset coefficient f1(c), usually from calibrate_f1.
            Defaults to None, use the published lower bound.

    Returns:
        V_min (float): 0.5 + c^3 f1 s + (f2 / s) ((I - I_min) / I_th)^2.
    """

    validity = validity_check(lam, i_over_ith)
    if not validity:
        raise errors.DomainError(f"Near threshold closed form invalid here: {validity.reason}")

    if f1 is None:
        f1 = static.NearThreshold.f1_lower_bound

    expansion = expansion_params(lam, i_over_ith)
    offset = i_over_ith - expansion.i_min_over_ith
    return 0.5 + expansion.c ** 3 * f1 * expansion.s + expansion.f2 / expansion.s * offset ** 2


def _series_v_min(lam: complex, i_over_ith: float, tol: float) -> float:
    p = i_over_ith * abs(lam) ** 2
    return 1 + 2 * series.moments(lam, p, tol=tol).excess


def exact_series_minimum(lam: complex, tol: float = static.Series.tol) -> SeriesMinimum:
    """Locate the minimum of the exact series V_min over the pump intensity.

    Args:
        lam (complex): Lambda, monostable.
        tol (float): Series tolerance.
            Defaults to static.Series.tol.

    Returns:
        Minimum (SeriesMinimum): Location and value.
    """

    lam = complex(lam)
    centre = predicted_minimum_location(lam)
    half = static.NearThreshold.search_halfwidth
    grid = np.linspace(max(centre - half, 0.0), centre + half, static.NearThreshold.search_points)
    values = [_series_v_min(lam, float(i), tol) for i in grid]

    best = int(np.argmin(values))
    lower = float(grid[max(best - 1, 0)])
    upper = float(grid[min(best + 1, len(grid) - 1)])
    assert lower < upper, "Empty bracket around the grid minimum"

    result = optimize.minimize_scalar(
        lambda i: _series_v_min(lam, i, tol),
        bounds=(lower, upper),
        method="bounded",
        options={"xatol": 1e-9},
        )
    logger.debug("Exact series minimum at I/I_th=%.9g, V_min=%.9g", result.x, result.fun)
    return SeriesMinimum(i_over_ith=float(result.x), v_min=float(result.fun))


def calibrate_f1(lam: complex, tol: float = static.Series.tol) -> float:
    """Fit the offset coefficient f1(c) to the exact series minimum.

    Args:
        lam (complex): Lambda, monostable.
        tol (float): Series tolerance.
            Defaults to static.Series.tol.

    Returns:
        f1 (float): (min V_min - 0.5) / (c^3 s), never below the published bound.
    """

    expansion = expansion_params(lam)
    minimum = exact_series_minimum(lam, tol)
    f1 = minimum.offset / (expansion.c ** 3 * expansion.s)

    bound = static.NearThreshold.f1_lower_bound
    if f1 < bound:
        warnings.warn(
            f"Calibrated f1 = {f1:.6g} is below the published bound {bound}, using the bound",
            errors.NopoWarning,
            stacklevel=2,
            )
        return bound

    return f1
