#!/usr/bin/env python3
"""Semiclassical photon number and the far above threshold asymptotics

Provides the semiclassical photon number n_cl, the quantum correction
dn = n - n_cl from the exact series, a Gaussian estimate of dn that needs no
series at all, and the limiting value of the minimized variance.

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

from dataclasses import dataclass, replace
from enum import StrEnum
import logging
import math

import numpy as np

from . import errors
from . import series
from . import static
from . import utils

logger = logging.getLogger(__name__)


class Branch(StrEnum):
    """Which semiclassical solution carries the photon number"""

    BELOW_THRESHOLD = "BelowThreshold"
    ABOVE_THRESHOLD = "AboveThreshold"


@dataclass(frozen=True)
class SemiclassicalPoint:
    """Semiclassical description of one parameter point"""

    n_cl: float
    """Semiclassical photon number of the generating branch, 0 below threshold"""

    mu: int
    """Integer part of 2 n_cl"""

    xi: float
    """Fractional part of 2 n_cl"""

    branch: Branch
    """BelowThreshold or AboveThreshold"""

    n_unstable: float | None = None
    """Photon number of the unstable middle branch, when it exists"""

    delta_n: float | None = None
    """n - n_cl, None until the series has been evaluated"""


@dataclass(frozen=True)
class AsymptoticResult:
    """Far above threshold limit of the minimized variance"""

    v_min: float
    """0.5 - 2 dn"""

    delta_n: float
    """Quantum correction from the series"""

    w: float
    """(p/n) dn/dp"""

    pair_modulus: float
    """|<a1 a2>| from n sqrt(1 + Q (2 dn + w) / p)"""

    q: float
    """Q = 2R + 2 dn + w"""


def classical_photon_number(lam: complex, p: float) -> SemiclassicalPoint:
    """Semiclassical photon number.

    Args:
        lam (complex): Lambda.
        p (float): Scaled pump intensity, p >= 0.

    Returns:
        Point (SemiclassicalPoint): n_cl = max(0, (-Re Lambda + sqrt(p - (Im Lambda)^2)) / 2).
    """

    lam = complex(lam)
    if not (math.isfinite(p) and p >= 0):
        raise errors.InvalidParams(f"p must be non-negative and finite, got {p!r}")

    y2 = lam.imag ** 2
    if p <= y2:
        return SemiclassicalPoint(n_cl=0.0, mu=0, xi=0.0, branch=Branch.BELOW_THRESHOLD)

    r = math.sqrt(p - y2)
    n_cl = (r - lam.real) / 2
    unstable = (-lam.real - r) / 2

    # The middle branch only exists in the bistable window
    n_unstable = unstable if unstable > 0 else None

    if n_cl <= 0:
        return SemiclassicalPoint(
            n_cl=0.0, mu=0, xi=0.0, branch=Branch.BELOW_THRESHOLD, n_unstable=n_unstable)

    mu = math.floor(2 * n_cl)
    return SemiclassicalPoint(
        n_cl=n_cl,
        mu=mu,
        xi=2 * n_cl - mu,
        branch=Branch.ABOVE_THRESHOLD,
        n_unstable=n_unstable,
        )


def _correction(stats: series.JStats, point: SemiclassicalPoint) -> float:
    """n - n_cl, from the stored offset when the generating branch is occupied"""

    if point.branch is Branch.ABOVE_THRESHOLD and stats.mean_offset is not None:
        return stats.mean_offset / 2
    return series.mean_photon_number(stats) - point.n_cl


def quantum_correction(lam: complex, p: float, tol: float = static.Series.tol) -> float:
    """Quantum correction to the semiclassical photon number.

    Args:
        lam (complex): Lambda.
        p (float): Scaled pump intensity.
        tol (float): Series tolerance.
            Defaults to static.Series.tol.

    Returns:
        dn (float): n - n_cl, the saddle route allowed.
    """

    point = classical_photon_number(lam, p)
    if p == 0:
        return 0.0
    return _correction(series.j_stats(lam, p, tol), point)


def semiclassical_point(lam: complex, p: float, stats: series.JStats | None = None, tol: float = static.Series.tol) -> SemiclassicalPoint:
    """Semiclassical photon number with the quantum correction filled in.

    Args:
        lam (complex): Lambda.
        p (float): Scaled pump intensity.
        stats (series.JStats | None): Weight family statistics at the same point.
            Defaults to None, evaluate them.
        tol (float): Series tolerance, used when stats is None.
            Defaults to static.Series.tol.

    Returns:
        Point (SemiclassicalPoint): The point, delta_n set.
    """

    point = classical_photon_number(lam, p)
    if p == 0:
        return replace(point, delta_n=0.0)

    if stats is None:
        stats = series.j_stats(lam, p, tol)

    return replace(point, delta_n=_correction(stats, point))


def gaussian_delta_n(lam: complex, p: float) -> float:
    """Quantum correction from the Gaussian shape of the weights around 2 n_cl.

    Args:
        lam (complex): Lambda.
        p (float): Scaled pump intensity, with 2 n_cl >= 100.

    Returns:
        dn (float): F / (2N) - xi / 2.
    """

    point = classical_photon_number(lam, p)
    if point.branch is not Branch.ABOVE_THRESHOLD or point.mu < static.Semiclassical.min_mu:
        raise errors.DomainError(
            f"The Gaussian estimate needs 2 n_cl >= {static.Semiclassical.min_mu}, got {2 * point.n_cl:.6g}")

    mu = float(point.mu)
    xi = point.xi
    window = math.ceil(static.Semiclassical.window * math.sqrt(mu))

    # N / N_mu in closed form
    norm = math.sqrt(math.pi * mu) * math.exp((1 - 2 * xi) ** 2 / (4 * mu))

    # F / N_mu = sum of k (N_{mu+k} - N_{mu-k}) / N_mu
    total = utils.CompensatedSum()
    for start in range(1, window + 1, static.Series.chunk):
        k = np.arange(start, min(start + static.Series.chunk, window + 1), dtype=float)
        cubic = k ** 3 / (3 * mu ** 2)
        lower = -k * (k - 1 + 2 * xi) / mu - cubic
        difference = k * (4 * xi - 2) / mu + 2 * cubic
        total.add(np.sum(k * np.exp(lower) * np.expm1(difference)))

    logger.debug("Gaussian dn at mu=%d, xi=%.6g over %d terms", point.mu, xi, window)
    return total.value / (2 * norm) - xi / 2


def asymptotic_v_min(lam: complex, p: float, tol: float = static.Series.tol) -> AsymptoticResult:
    """Far above threshold limit of the minimized variance.

    Args:
        lam (complex): Lambda.
        p (float): Scaled pump intensity, at least 100 |Lambda|^2.
        tol (float): Series tolerance.
            Defaults to static.Series.tol.

    Returns:
        Result (AsymptoticResult): 0.5 - 2 dn, with the pieces of the exact pair modulus.
    """

    lam = complex(lam)
    if not p >= static.Semiclassical.far_above * abs(lam) ** 2:
        raise errors.DomainError(
            f"p = {p!r} is not far above threshold, need p >= {static.Semiclassical.far_above:g} |Lambda|^2")

    stats = series.j_stats(lam, p, tol)
    point = classical_photon_number(lam, p)
    delta_n = _correction(stats, point)
    n = series.mean_photon_number(stats)
    w = stats.j_var / stats.j_mean
    q = 2 * math.sqrt(p - lam.imag ** 2) + 2 * delta_n + w

    return AsymptoticResult(
        v_min=0.5 - 2 * delta_n,
        delta_n=delta_n,
        w=w,
        pair_modulus=n * math.sqrt(1 + q * (2 * delta_n + w) / p),
        q=q,
        )
