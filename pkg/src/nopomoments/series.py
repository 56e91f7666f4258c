#!/usr/bin/env python3
"""Exact steady state moment series

Evaluates the normalization N, the statistics of the weight family
N_j = p^j / |(Lambda+1)_j|^2, the mean photon number, the pair moment
<a1 a2> and the general normally ordered moments. Terms are produced in log
space from their exact ratios, rescaled by the running maximum and summed in
ascending order with compensated accumulation. Far above threshold, where the
direct sum would need more than `static.Series.max_terms` terms, the weight
family is evaluated from its local expansion around the maximum instead.

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
from typing import Callable, Sequence

import numpy as np
from scipy import special

from . import errors
from . import static
from . import utils

logger = logging.getLogger(__name__)


class Method(StrEnum):
    """How a JStats was obtained"""

    DIRECT_SUM = "DirectSum"
    SADDLE_APPROX = "SaddleApprox"


class Route(StrEnum):
    """How the pair moment of a MomentSet was obtained"""

    SERIES_DIRECT = "SeriesDirect"
    ALT_FORM = "AltForm"


@dataclass(frozen=True)
class JStats:
    """Summary of the weight family N_j / N"""

    log_n: float
    """Natural log of N"""

    j_mean: float
    """Mean of j"""

    j_var: float
    """Variance of j"""

    j_peak: int
    """Index of the largest term"""

    terms_used: int
    """Number of terms summed, 0 for the saddle route"""

    tail_bound: float
    """Relative size of the discarded tail, or the error estimate of the saddle route"""

    method: Method
    """DirectSum or SaddleApprox"""

    mean_offset: float | None = None
    """j_mean - (R - Re Lambda) with R = sqrt(p - (Im Lambda)^2), None when p <= (Im Lambda)^2"""


@dataclass(frozen=True)
class MomentSet:
    """Mean photon number and pair moment of one parameter point"""

    n: float
    """Mean photon number per mode"""

    pair_moment: complex
    """<a1 a2>"""

    p_dn_dp: float
    """p dn/dp, equal to Var(j)/2"""

    stats: JStats
    """The weight family statistics"""

    route: Route
    """SeriesDirect or AltForm"""

    excess: float
    """n - |<a1 a2>|, evaluated without cancellation far above threshold"""

    lam: complex
    """Lambda"""

    p: float
    """Scaled pump intensity"""

    phi_e: float = 0.0
    """Pump phase"""


@dataclass
class _Scan:
    """Result of one log space summation"""

    scale_hi: float
    scale_lo: float
    sums: list
    terms_used: int
    peak_index: int
    tail_bound: float

    @property
    def log_scale(self) -> float:
        """Log of the rescaling applied to the sums"""
        return self.scale_hi + self.scale_lo


def _check_tol(tol: float):
    if not 0 < tol < static.Series.tol_max:
        raise errors.InvalidParams(f"tol must be in (0, {static.Series.tol_max:g}), got {tol!r}")


def _check_p(p: float):
    if not (math.isfinite(p) and p >= 0):
        raise errors.InvalidParams(f"p must be non-negative and finite, got {p!r}")


def _check_pole(lam: complex, shift: int = 0):
    """Raise PoleInput if lam + 1 + shift + j = 0 for an integer j >= 0"""

    if lam.imag == 0 and lam.real == math.floor(lam.real) and lam.real + 1 + shift <= 0:
        raise errors.PoleInput(f"Lambda = {lam!r} makes Lambda + 1 + j vanish for an integer j")


def _check_order(*orders: int):
    for order in orders:
        if not (isinstance(order, int) and 0 <= order <= static.Series.max_order):
            raise errors.InvalidParams(
                f"Moment orders must be integers in [0, {static.Series.max_order}], got {order!r}")


def upper_saddle(lam: complex, p: float) -> float:
    """Estimated index of the largest term, the upper root of |Lambda+1+j|^2 = p.

    Args:
        lam (complex): Lambda.
        p (float): Scaled pump intensity.

    Returns:
        Peak (float): The root, or 0.0 when the terms only decrease.
    """

    y2 = lam.imag ** 2
    if p <= y2:
        return 0.0
    return max(0.0, math.sqrt(p - y2) - lam.real - 1)


def _extension(peak: float) -> int:
    return math.ceil(static.Series.extension * math.sqrt(peak + 10))


def _scan(
    increments: Callable[[np.ndarray], np.ndarray],
    weights: Sequence[Callable[[np.ndarray], np.ndarray] | None],
    peak_estimate: float,
    tol: float,
    max_terms: int,
    complex_weights: bool = False,
        ) -> _Scan:
    """Sum a series T_0 = 1, T_{j+1} = T_j exp(increments(j)) against weights.

    Args:
        increments (Callable): Maps an array of j to log(T_{j+1}/T_j).
        weights (Sequence[Callable | None]): Weight functions of j, None for 1.
        peak_estimate (float): No stop is accepted before this index.
        tol (float): Relative tail tolerance.
        max_terms (int): Term ceiling.
        complex_weights (bool): Do any weights return complex values?
            Defaults to False.

    Returns:
        Scan (_Scan): Sums of weight * T_j * exp(-log_scale).
    """

    assert weights, "At least one weight function is needed"

    stop_log = math.log(tol * static.Series.stop_factor)
    extension = _extension(peak_estimate)

    # Log of the first term of the current chunk
    carry = utils.CompensatedSum()

    if complex_weights:
        accumulators = [utils.ComplexCompensatedSum() for _ in weights]
    else:
        accumulators = [utils.CompensatedSum() for _ in weights]

    max_hi, max_lo = -math.inf, 0.0
    peak_index = 0
    start = 0
    stop = None
    tail = math.inf

    while stop is None or start < stop:
        if start >= max_terms:
            raise errors.Nonconvergence(
                f"Series needs more than {max_terms} terms (peak near {peak_estimate:.6g})")

        size = static.Series.chunk
        if stop is not None:
            size = min(size, stop - start)
        size = min(size, max_terms - start)

        j = np.arange(start, start + size, dtype=float)
        inc = increments(j)
        rel = np.zeros(size)
        np.cumsum(inc[:-1], out=rel[1:])
        total = float(rel[-1] + inc[-1])

        base_hi, base_lo = carry.parts
        rel += base_lo

        # Rescale everything so far if this chunk holds a new maximum
        k = int(np.argmax(rel))
        if max_hi == -math.inf or (base_hi - max_hi) + (rel[k] - max_lo) > 0:
            if max_hi != -math.inf:
                factor = math.exp((max_hi - base_hi) + (max_lo - rel[k]))
                for acc in accumulators:
                    acc.scale(factor)
            max_hi, max_lo = base_hi, float(rel[k])
            peak_index = start + k

        exponent = (base_hi - max_hi) + (rel - max_lo)
        terms = np.exp(exponent)

        for acc, weight in zip(accumulators, weights):
            if weight is None:
                acc.add(np.sum(terms))
            else:
                acc.add(np.sum(terms * weight(j)))

        carry.add(total)

        # First negligible term past the peak fixes the stop point
        if stop is None:
            past = (j >= peak_estimate) & (exponent < stop_log)
            if past.any():
                stop = start + int(np.argmax(past)) + 1 + extension

        start += size

        if stop is not None and start >= stop:
            ratio = math.exp(float(inc[-1]))
            first = abs(accumulators[0].value)
            if ratio < 1 and first > 0:
                tail = math.exp(float(exponent[-1])) * ratio / (1 - ratio) / first
            else:
                tail = math.inf

            # Keep going until the geometric bound is met
            if tail > tol:
                stop = start + extension

    logger.debug("Series summed %d terms, peak at %d, tail %.3g", start, peak_index, tail)

    return _Scan(
        scale_hi=max_hi,
        scale_lo=max_lo,
        sums=[acc.value for acc in accumulators],
        terms_used=start,
        peak_index=peak_index,
        tail_bound=tail,
        )


def _n_increments(lam: complex, p: float) -> Callable[[np.ndarray], np.ndarray]:
    """log(N_{j+1}/N_j) = log p - log|Lambda+1+j|^2"""

    x = lam.real + 1
    y2 = lam.imag ** 2
    log_p = math.log(p)

    def increments(j: np.ndarray) -> np.ndarray:
        return log_p - np.log(np.square(x + j) + y2)

    return increments


def _mean_offset(lam: complex, p: float, reference: int, mean_rel: float) -> float | None:
    """j_mean - (R - Re Lambda), formed exactly from its parts"""

    y2 = lam.imag ** 2
    if p <= y2:
        return None
    return utils.exact_sum(float(reference), mean_rel, -math.sqrt(p - y2), lam.real)


def _vacuum_stats() -> JStats:
    return JStats(
        log_n=0.0,
        j_mean=0.0,
        j_var=0.0,
        j_peak=0,
        terms_used=1,
        tail_bound=0.0,
        method=Method.DIRECT_SUM,
        mean_offset=None,
        )


def _direct(lam: complex, p: float, tol: float, max_terms: int, with_pair: bool) -> tuple[JStats, complex | None]:
    """Direct summation of the N series, optionally with the pair moment sum"""

    peak = upper_saddle(lam, p)
    reference = int(round(peak))

    weights = [
        None,
        lambda j: j - reference,
        lambda j: np.square(j - reference),
        ]
    if with_pair:
        weights += [
            lambda j: j * (lam.real + j),
            lambda j: j,
            ]

    scan = _scan(_n_increments(lam, p), weights, peak, tol, max_terms)
    s0, s1, s2 = scan.sums[:3]
    mean_rel = s1 / s0
    var = max(0.0, s2 / s0 - mean_rel ** 2)

    stats = JStats(
        log_n=scan.log_scale + math.log(s0),
        j_mean=reference + mean_rel,
        j_var=var,
        j_peak=scan.peak_index,
        terms_used=scan.terms_used,
        tail_bound=scan.tail_bound,
        method=Method.DIRECT_SUM,
        mean_offset=_mean_offset(lam, p, reference, mean_rel),
        )

    if not with_pair:
        return stats, None

    # Sum of j (Lambda* + j) N_j over N
    weighted = complex(scan.sums[3], -lam.imag * scan.sums[4]) / s0
    return stats, weighted


def j_distribution(lam: complex, p: float, tol: float = static.Series.tol, max_terms: int = static.Series.max_terms) -> JStats:
    """Sum the weight family directly.

    Args:
        lam (complex): Lambda.
        p (float): Scaled pump intensity, p >= 0.
        tol (float): Relative tail tolerance, in (0, 1e-3).
            Defaults to static.Series.tol.
        max_terms (int): Term ceiling.
            Defaults to static.Series.max_terms.

    Returns:
        Stats (JStats): N, mean and variance of j, method DirectSum.
    """

    lam = complex(lam)
    _check_tol(tol)
    _check_p(p)
    if p == 0:
        return _vacuum_stats()

    _check_pole(lam)
    return _direct(lam, p, tol, max_terms, with_pair=False)[0]


def saddle_approx(lam: complex, p: float) -> JStats:
    """Evaluate the weight family from its expansion around the maximum.

    Keeps the quadratic and cubic terms of the continuous log weight, which
    fixes the mean to O(1) accuracy. With R = sqrt(p - (Im Lambda)^2) and
    b = p / (4 R^2) the mean is R - Re Lambda - b and the variance is
    p / (2R) + 4b^2 - b.

    Args:
        lam (complex): Lambda.
        p (float): Scaled pump intensity, above (Im Lambda)^2.

    Returns:
        Stats (JStats): N, mean and variance of j, method SaddleApprox.
    """

    lam = complex(lam)
    _check_p(p)
    y2 = lam.imag ** 2
    if p <= y2:
        raise errors.DomainError(f"No real saddle for p = {p!r} <= (Im Lambda)^2 = {y2!r}")

    r = math.sqrt(p - y2)
    root = r - lam.real - 1
    curvature = 2 * r / p
    sigma = math.sqrt(1 / curvature)
    if root - static.Series.saddle_window * sigma < 0:
        raise errors.DomainError(
            f"Saddle window reaches j < 0 (peak {root:.6g}, width {sigma:.6g}), use the direct sum")

    _check_pole(lam)
    b = p / (4 * r ** 2)
    peak = math.ceil(root)

    # log N at the integer peak, plus the Gaussian normalization
    log_peak = peak * math.log(p) - 2 * (special.loggamma(lam + 1 + peak) - special.loggamma(lam + 1)).real
    log_n = log_peak + curvature * (peak - root - 0.5) ** 2 / 2 + 0.5 * math.log(2 * math.pi / curvature)

    stats = JStats(
        log_n=log_n,
        j_mean=(r - lam.real) - b,
        j_var=1 / curvature + 4 * b ** 2 - b,
        j_peak=peak,
        terms_used=0,
        tail_bound=curvature + p / r ** 3,
        method=Method.SADDLE_APPROX,
        mean_offset=-b,
        )
    logger.debug("Saddle route at Lambda=%r, p=%.6g: peak %d", lam, p, peak)
    return stats


def direct_sum_feasible(lam: complex, p: float, max_terms: int = static.Series.max_terms) -> bool:
    """Does the direct sum fit under the term ceiling?

    Args:
        lam (complex): Lambda.
        p (float): Scaled pump intensity.
        max_terms (int): Term ceiling.
            Defaults to static.Series.max_terms.

    Returns:
        Feasible (bool): Peak estimate plus the extension stays under the ceiling.
    """

    peak = upper_saddle(complex(lam), p)
    return peak + 2 * _extension(peak) < max_terms


def j_stats(lam: complex, p: float, tol: float = static.Series.tol, max_terms: int = static.Series.max_terms) -> JStats:
    """Weight family statistics on the automatic route.

    Args:
        lam (complex): Lambda.
        p (float): Scaled pump intensity.
        tol (float): Relative tail tolerance.
            Defaults to static.Series.tol.
        max_terms (int): Term ceiling.
            Defaults to static.Series.max_terms.

    Returns:
        Stats (JStats): Direct sum when it fits, saddle approximation otherwise.
    """

    lam = complex(lam)
    if direct_sum_feasible(lam, p, max_terms):
        return j_distribution(lam, p, tol, max_terms)

    if p > lam.imag ** 2:
        return saddle_approx(lam, p)

    raise errors.Nonconvergence(f"Neither route applies at Lambda = {lam!r}, p = {p!r}")


def mean_photon_number(stats: JStats) -> float:
    """Mean photon number per mode.

    Args:
        stats (JStats): Weight family statistics.

    Returns:
        n (float): j_mean / 2.
    """

    return stats.j_mean / 2


def linear_photon_number(lam: complex, p: float) -> float:
    """Far below threshold photon number, linear in p.

    Args:
        lam (complex): Lambda.
        p (float): Scaled pump intensity.

    Returns:
        n (float): p / (2 |Lambda + 1|^2).
    """

    return p / (2 * abs(complex(lam) + 1) ** 2)


def pair_moment(lam: complex, p: float, phi_e: float = 0.0, tol: float = static.Series.tol, max_terms: int = static.Series.max_terms) -> complex:
    """The pair moment <a1 a2> by direct summation.

    Args:
        lam (complex): Lambda.
        p (float): Scaled pump intensity.
        phi_e (float): Pump phase.
            Defaults to 0.0.
        tol (float): Relative tail tolerance.
            Defaults to static.Series.tol.
        max_terms (int): Term ceiling.
            Defaults to static.Series.max_terms.

    Returns:
        Pair (complex): e^{i phi_e} / (2 N sqrt p) * sum of j (Lambda* + j) N_j.
    """

    lam = complex(lam)
    _check_tol(tol)
    _check_p(p)
    if p == 0:
        return 0j

    _check_pole(lam)
    weighted = _direct(lam, p, tol, max_terms, with_pair=True)[1]
    return cmath.rect(1.0, phi_e) * weighted / (2 * math.sqrt(p))


def pair_moment_alt(stats: JStats, lam: complex, p: float, phi_e: float = 0.0) -> complex:
    """The pair moment from n and p dn/dp.

    Args:
        stats (JStats): Weight family statistics at (lam, p).
        lam (complex): Lambda.
        p (float): Scaled pump intensity.
        phi_e (float): Pump phase.
            Defaults to 0.0.

    Returns:
        Pair (complex): e^{i phi_e} (n / sqrt p) (Lambda* + 2n + (p/n) dn/dp).
    """

    n = mean_photon_number(stats)
    if p == 0 or n == 0:
        raise errors.DegenerateInput("The alternative pair moment form needs p > 0 and n > 0")

    a = complex(lam).conjugate() + stats.j_mean + stats.j_var / stats.j_mean
    return cmath.rect(1.0, phi_e) * n * a / math.sqrt(p)


def pair_excess(stats: JStats, lam: complex, p: float, pair: complex) -> float:
    """n - |<a1 a2>| without cancellation.

    Above threshold this uses |<a1a2>|^2 = p + Q (2 dn + w), with
    w = (p/n) dn/dp and Q = 2R + 2 dn + w, which is exact.

    Args:
        stats (JStats): Weight family statistics.
        lam (complex): Lambda.
        p (float): Scaled pump intensity.
        pair (complex): The pair moment at the same point.

    Returns:
        Excess (float): n - |<a1 a2>|.
    """

    lam = complex(lam)
    n = mean_photon_number(stats)
    if stats.mean_offset is None or n <= 0:
        return n - abs(pair)

    r = math.sqrt(p - lam.imag ** 2)
    w = stats.j_var / stats.j_mean
    shift = stats.mean_offset + w
    modulus = abs(complex(r + shift, lam.imag))
    root_p = math.sqrt(p)
    return n * (-shift * (2 * r + shift)) / (root_p * (root_p + modulus))


def moments(lam: complex, p: float, phi_e: float = 0.0, tol: float = static.Series.tol, max_terms: int = static.Series.max_terms) -> MomentSet:
    """Photon number and pair moment on the automatic route.

    Args:
        lam (complex): Lambda.
        p (float): Scaled pump intensity.
        phi_e (float): Pump phase.
            Defaults to 0.0.
        tol (float): Relative tail tolerance.
            Defaults to static.Series.tol.
        max_terms (int): Term ceiling.
            Defaults to static.Series.max_terms.

    Returns:
        Moments (MomentSet): The moments with the route recorded.
    """

    lam = complex(lam)
    _check_tol(tol)
    _check_p(p)

    # Vacuum
    if p == 0:
        return MomentSet(
            n=0.0, pair_moment=0j, p_dn_dp=0.0, stats=_vacuum_stats(),
            route=Route.SERIES_DIRECT, excess=0.0, lam=lam, p=0.0, phi_e=phi_e,
            )

    _check_pole(lam)
    if direct_sum_feasible(lam, p, max_terms):
        stats, weighted = _direct(lam, p, tol, max_terms, with_pair=True)
        pair = cmath.rect(1.0, phi_e) * weighted / (2 * math.sqrt(p))
        route = Route.SERIES_DIRECT
    else:
        stats = j_stats(lam, p, tol, max_terms)
        pair = pair_moment_alt(stats, lam, p, phi_e)
        route = Route.ALT_FORM

    return MomentSet(
        n=mean_photon_number(stats),
        pair_moment=pair,
        p_dn_dp=stats.j_var / 2,
        stats=stats,
        route=route,
        excess=pair_excess(stats, lam, p, pair),
        lam=lam,
        p=p,
        phi_e=phi_e,
        )


def _log_falling(j: np.ndarray, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Log of the falling factorial j (j-1) ... (j-count+1), and where it is nonzero"""

    total = np.zeros(j.shape)
    nonzero = np.ones(j.shape, dtype=bool)
    for i in range(count):
        factor = j - i
        nonzero &= factor > 0
        total += np.log(np.where(factor > 0, factor, 1.0))
    return total, nonzero


def _weighted_mean(
    lam: complex,
    p: float,
    log_weight: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]],
    first: int,
    tol: float,
    max_terms: int,
    complex_weights: bool = False,
        ) -> tuple[complex, complex]:
    """Mean of a weight over the N_j family, the weight given by its log.

    Args:
        lam (complex): Lambda.
        p (float): Scaled pump intensity, p > 0.
        log_weight (Callable): Maps an array of j to the log weight and a nonzero mask.
        first (int): Smallest j with a nonzero weight.
        tol (float): Relative tail tolerance.
        max_terms (int): Term ceiling.
        complex_weights (bool): Is the log weight complex?
            Defaults to False.

    Returns:
        Log reference (complex): The log weight at the reference index.
        Ratio (complex): The mean divided by exp(log reference).
    """

    peak = upper_saddle(lam, p)
    reference = np.array([float(max(round(peak), first))])
    log_reference = log_weight(reference)[0][0]

    def weight(j: np.ndarray) -> np.ndarray:
        values, nonzero = log_weight(j)
        return np.where(nonzero, np.exp(values - log_reference), 0.0)

    scan = _scan(_n_increments(lam, p), [None, weight], peak, tol, max_terms, complex_weights)
    return complex(log_reference), scan.sums[1] / scan.sums[0]


def _scaled(log_factor: complex, ratio: complex) -> complex:
    """exp(log_factor) * ratio, refusing results outside the float range"""
    try:
        return cmath.exp(log_factor) * ratio
    except OverflowError as e:
        raise errors.DomainError(f"Moment exceeds the float range, log magnitude {log_factor.real:.6g}") from e


def general_moment_kl(lam: complex, epsilon: complex, k: int, l: int, tol: float = static.Series.tol, max_terms: int = static.Series.max_terms) -> complex:
    """The moment <a1^+k a1^l a2^+k a2^l>.

    Shifting the summation index by min(k, l) turns the series into a mean
    over the N_j family, so the moment needs no second normalization.

    Args:
        lam (complex): Lambda.
        epsilon (complex): E / kappa, with the pump phase.
        k (int): Creation operator power, 0 to 30.
        l (int): Annihilation operator power, 0 to 30.
        tol (float): Relative tail tolerance.
            Defaults to static.Series.tol.
        max_terms (int): Term ceiling.
            Defaults to static.Series.max_terms.

    Returns:
        Moment (complex): The moment.
    """

    lam = complex(lam)
    epsilon = complex(epsilon)
    _check_tol(tol)
    _check_order(k, l)
    p = 4 * abs(epsilon) ** 2
    _check_p(p)
    if p == 0:
        return 1 + 0j if k == l == 0 else 0j

    _check_pole(lam)
    if k == l == 0:
        return 1 + 0j

    q = min(k, l)
    d = abs(k - l)

    # Excess annihilators pair with epsilon and Lambda, excess creators with the conjugates
    zeta, z = (epsilon, lam) if l > k else (epsilon.conjugate(), lam.conjugate())

    def log_weight(j: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        low, nonzero = _log_falling(j, q)
        high = _log_falling(j + d, q + d)[0]
        values = (low + high).astype(complex)
        for i in range(1, d + 1):
            values -= np.log(z + j + i)
        return values, nonzero

    log_reference, ratio = _weighted_mean(lam, p, log_weight, q, tol, max_terms, complex_weights=True)
    log_factor = log_reference - q * math.log(4)
    if d:
        log_factor += d * cmath.log(zeta)
    return _scaled(log_factor, ratio)


def general_moment_mn(lam: complex, p: float, m: int, n: int, tol: float = static.Series.tol, max_terms: int = static.Series.max_terms) -> float:
    """The moment <a1^+m a1^m a2^+n a2^n>.

    Equal to 2^-(m+n) times the mean of the falling factorial product
    j!/(j-m)! j!/(j-n)! over the N_j family.

    Args:
        lam (complex): Lambda.
        p (float): Scaled pump intensity.
        m (int): Power on mode 1, 0 to 30.
        n (int): Power on mode 2, 0 to 30.
        tol (float): Relative tail tolerance.
            Defaults to static.Series.tol.
        max_terms (int): Term ceiling.
            Defaults to static.Series.max_terms.

    Returns:
        Moment (float): The moment. Symmetric under swapping m and n.
    """

    lam = complex(lam)
    _check_tol(tol)
    _check_order(m, n)
    _check_p(p)
    if n > m:
        m, n = n, m

    if p == 0:
        return 1.0 if m == 0 else 0.0

    _check_pole(lam)
    if m == 0:
        return 1.0

    def log_weight(j: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        first, nonzero = _log_falling(j, m)
        return first + _log_falling(j, n)[0], nonzero

    log_reference, ratio = _weighted_mean(lam, p, log_weight, m, tol, max_terms)
    return _scaled(log_reference - (m + n) * math.log(2), ratio).real
