#!/usr/bin/env python3
"""Two-mode squeezing and the inseparability verdict

Evaluates the EPR variance V(X1 - X2) = V(Y1 + Y2) from a MomentSet, its
minimum over the quadrature phases, the minimizing phase and the sufficient
inseparability verdict. Quadratures are X_k = (a_k e^{-i theta} +
a_k^+ e^{i theta}) / sqrt 2, so the vacuum level is 1.

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
import math

from . import errors
from . import series
from . import static
from . import utils


class Verdict(StrEnum):
    """Outcome of the sufficient criterion. There is no Separable"""

    ENTANGLED = "Entangled"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class EntanglementResult:
    """Phase optimized EPR variance of one parameter point"""

    v_min: float
    """Minimized variance"""

    theta_sum: float
    """Minimizing theta1 + theta2, principal value"""

    theta_relative: float
    """arg<a1 a2> - phi_e, principal value"""

    entangled_sufficient: bool
    """v_min < 1"""

    n_used: float
    """Mean photon number the result was computed from"""

    pair_moment_used: complex
    """Pair moment the result was computed from"""

    phase_from_limit: bool = False
    """Were the phases taken from the small p limit -arg(Lambda + 1)?"""

    @property
    def verdict(self) -> Verdict:
        """Entangled or Inconclusive"""
        return Verdict.ENTANGLED if self.entangled_sufficient else Verdict.INCONCLUSIVE


def variance(theta1: float, theta2: float, moments: series.MomentSet) -> float:
    """EPR variance at given quadrature phases.

    Args:
        theta1 (float): Quadrature phase of mode 1.
        theta2 (float): Quadrature phase of mode 2.
        moments (series.MomentSet): Moments of the point.

    Returns:
        Variance (float): 1 + 2n - 2|<a1a2>| cos(theta1 + theta2 - arg<a1a2>).
    """

    pair = moments.pair_moment
    if pair == 0:
        return 1 + 2 * moments.n

    return 1 + 2 * moments.n - 2 * abs(pair) * math.cos(theta1 + theta2 - cmath.phase(pair))


def anti_squeezed_variance(moments: series.MomentSet) -> float:
    """EPR variance at the phase sum opposite to the minimizing one.

    Args:
        moments (series.MomentSet): Moments of the point.

    Returns:
        Variance (float): 1 + 2(n + |<a1 a2>|).
    """

    return 1 + 2 * (moments.n + abs(moments.pair_moment))


def _limit_phase(lam: complex) -> float:
    """arg<a1 a2> - phi_e as p goes to 0"""
    return utils.principal_angle(-cmath.phase(complex(lam) + 1))


def relative_phase(moments: series.MomentSet, phi_e: float | None = None) -> float:
    """The phase Theta = arg<a1 a2> - phi_e.

    Args:
        moments (series.MomentSet): Moments of the point.
        phi_e (float | None): Pump phase.
            Defaults to None, use moments.phi_e.

    Returns:
        Theta (float): Principal value in (-pi, pi].
    """

    if phi_e is None:
        phi_e = moments.phi_e

    pair = moments.pair_moment
    if abs(pair) >= static.Entangle.phase_limit:
        return utils.principal_angle(cmath.phase(pair) - phi_e)

    # Underflowed but nonzero pump, the p -> 0+ limit applies
    if moments.p > 0:
        return _limit_phase(moments.lam)

    raise errors.UndefinedPhase("arg<a1 a2> is undefined at p = 0, where the pair moment vanishes exactly")


def minimized_variance(moments: series.MomentSet) -> EntanglementResult:
    """Minimize the EPR variance over the quadrature phases.

    Args:
        moments (series.MomentSet): Moments of the point.

    Returns:
        Result (EntanglementResult): V_min = 1 + 2(n - |<a1a2>|) and the phases.
    """

    pair = moments.pair_moment
    v_min = 1 + 2 * moments.excess

    if abs(pair) < static.Entangle.phase_limit:
        theta_relative = _limit_phase(moments.lam)
        from_limit = True
    else:
        theta_relative = utils.principal_angle(cmath.phase(pair) - moments.phi_e)
        from_limit = False

    return EntanglementResult(
        v_min=v_min,
        theta_sum=utils.principal_angle(theta_relative + moments.phi_e),
        theta_relative=theta_relative,
        entangled_sufficient=v_min < 1,
        n_used=moments.n,
        pair_moment_used=pair,
        phase_from_limit=from_limit,
        )


def cauchy_schwarz_margin(moments: series.MomentSet, tol: float = static.Series.tol) -> float:
    """Margin of the physicality bound |<a1a2>|^2 <= <a1^+ a1 a2 a2^+>.

    Args:
        moments (series.MomentSet): Moments of the point, direct route.
        tol (float): Series tolerance for the fourth order moment.
            Defaults to static.Series.tol.

    Returns:
        Margin (float): <a1^+ a1 a2^+ a2> + n - |<a1a2>|^2, non-negative for a physical state.
    """

    if moments.p == 0:
        return 0.0

    fourth = series.general_moment_mn(moments.lam, moments.p, 1, 1, tol)
    return fourth + moments.n - abs(moments.pair_moment) ** 2
