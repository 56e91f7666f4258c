#!/usr/bin/env python3
"""Single point reports, the oracle comparison and the asymptotic audit

Each function returns plain dicts and lists that the command line tool
prints; nothing here writes output itself.

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

from dataclasses import replace
import logging
from typing import Any

from . import entangle
from . import errors
from . import nearthreshold
from . import oracle
from . import params
from . import semiclassical
from . import series
from . import static

logger = logging.getLogger(__name__)

AUDIT_LADDER = (1e2, 1e3, 1e4)
"""Pump intensities of the audit, in units of |Lambda|^2"""

PUBLISHED = {
    "v_min_limit": 0.75,
    "delta_n_limit": -0.125,
    "w_limit": 0.5,
    "offset_ratio": 2.0,
    "f1_lower_bound": static.NearThreshold.f1_lower_bound,
    }
"""Published values the audit measures"""


def point_report(nopo: params.NopoParams, tol: float = static.Series.tol) -> dict[str, Any]:
    """Everything known about one parameter point.

    Args:
        nopo (params.NopoParams): Physical inputs.
        tol (float): Series tolerance.
            Defaults to static.Series.tol.

    Returns:
        Report (dict[str, Any]): Flat key to value mapping, in print order.
    """

    derived = params.derive(nopo)
    moments = series.moments(derived.lam, derived.p, derived.phi_e, tol)
    result = entangle.minimized_variance(moments)
    point = semiclassical.semiclassical_point(derived.lam, derived.p, moments.stats)
    thresholds = derived.thresholds

    report = {
        "lambda_re": derived.lam.real,
        "lambda_im": derived.lam.imag,
        "epsilon_re": derived.epsilon.real,
        "epsilon_im": derived.epsilon.imag,
        "p": derived.p,
        "es": derived.es,
        "regime": str(derived.regime),
        "adiabatic_ratio": derived.adiabatic_ratio,
        "zero_branch_stable": derived.zero_branch_stable,
        "p_mono": thresholds.p_mono,
        "p_bistable_lower": thresholds.p_bistable_lower,
        "p_bistable_upper": thresholds.p_bistable_upper,
        "e_threshold": thresholds.e_threshold,
        "es_threshold": thresholds.es_threshold,
        "n": moments.n,
        "pair_re": moments.pair_moment.real,
        "pair_im": moments.pair_moment.imag,
        "p_dn_dp": moments.p_dn_dp,
        "route": str(moments.route),
        "method": str(moments.stats.method),
        "terms_used": moments.stats.terms_used,
        "tail_bound": moments.stats.tail_bound,
        "v_min": result.v_min,
        "anti_squeezed": entangle.anti_squeezed_variance(moments),
        "theta_sum": result.theta_sum,
        "theta": result.theta_relative,
        "phase_from_limit": result.phase_from_limit,
        "verdict": str(result.verdict),
        "n_cl": point.n_cl,
        "n_unstable": point.n_unstable,
        "delta_n": point.delta_n,
        "mu": point.mu,
        "xi": point.xi,
        "branch": str(point.branch),
        }

    if moments.route is series.Route.SERIES_DIRECT and derived.p > 0:
        report["cauchy_schwarz_margin"] = entangle.cauchy_schwarz_margin(moments, tol)

    if derived.regime is params.Regime.MONOSTABLE:
        expansion = nearthreshold.expansion_params(derived.lam, derived.i_over_ith)
        validity = nearthreshold.validity_check(derived.lam, derived.i_over_ith)
        report.update({
            "nt_s": expansion.s,
            "nt_c": expansion.c,
            "nt_f2": expansion.f2,
            "nt_f3": expansion.f3,
            "nt_i_min_over_ith": expansion.i_min_over_ith,
            "nt_valid": validity.valid,
            "nt_reason": None if validity.reason is None else str(validity.reason),
            })
        if validity:
            report["nt_v_min_bound"] = nearthreshold.near_threshold_v_min(derived.lam, derived.i_over_ith)

    return report


def _deviation(reference: complex | float, value: complex | float) -> float:
    """Relative deviation, absolute when the reference is zero"""
    difference = abs(reference - value)
    if reference == 0:
        return difference
    return difference / abs(reference)


def oracle_check(nopo: params.NopoParams, config: oracle.OracleConfig | None = None, tol: float = static.Series.tol) -> dict[str, Any]:
    """Compare series moments with the master equation oracle.

    Args:
        nopo (params.NopoParams): Physical inputs, delta3 must be 0.
        config (oracle.OracleConfig | None): Oracle settings.
            Defaults to None, use oracle.OracleConfig().
        tol (float): Series tolerance.
            Defaults to static.Series.tol.

    Returns:
        Report (dict[str, Any]): "rows", one dict per compared quantity, and "summary".
    """

    derived = params.derive(nopo)
    state = oracle.converged_steady_state(nopo, config)
    moments = series.moments(derived.lam, derived.p, derived.phi_e, tol)
    v_series = entangle.minimized_variance(moments).v_min

    comparisons = [
        ("n", moments.n, state.n, static.Tolerances.n_and_pair, "relative"),
        ("pair", moments.pair_moment, state.pair_moment, static.Tolerances.n_and_pair, "relative"),
        ]
    for m, n in ((1, 1), (2, 1), (2, 2)):
        comparisons.append((
            f"mn_{m}{n}",
            series.general_moment_mn(derived.lam, derived.p, m, n, tol),
            oracle.oracle_moment(state, m, m, n, n).real,
            static.Tolerances.higher_moments,
            "relative",
            ))
    comparisons.append(("v_min", v_series, oracle.oracle_v_min(state), static.Tolerances.v_min, "absolute"))

    rows = []
    for name, reference, value, tolerance, kind in comparisons:
        deviation = abs(reference - value) if kind == "absolute" else _deviation(reference, value)
        rows.append({
            "quantity": name,
            "series_re": complex(reference).real,
            "series_im": complex(reference).imag,
            "oracle_re": complex(value).real,
            "oracle_im": complex(value).imag,
            "deviation": deviation,
            "kind": kind,
            "tolerance": tolerance,
            "passed": deviation <= tolerance,
            })

    summary = {
        "passed": all(row["passed"] for row in rows),
        "cutoff": state.cutoff,
        "tail_mass": state.cutoff_tail_mass,
        "residual": state.residual,
        "hermiticity_defect": state.hermiticity_defect,
        "min_eigenvalue": state.min_eigenvalue,
        "method": str(state.method),
        }
    for row in rows:
        if not row["passed"]:
            logger.info("Oracle check failed on %s: deviation %.3g", row["quantity"], row["deviation"])

    return {"rows": rows, "summary": summary}


def _series_v_min(lam: complex, p: float, tol: float) -> float:
    return entangle.minimized_variance(series.moments(lam, p, tol=tol)).v_min


def audit(nopo: params.NopoParams, tol: float = static.Series.tol, ladder: tuple[float, ...] = AUDIT_LADDER) -> dict[str, Any]:
    """Measure the far above threshold and near threshold constants.

    Args:
        nopo (params.NopoParams): Rates. The pump amplitude is ignored.
        tol (float): Series tolerance.
            Defaults to static.Series.tol.
        ladder (tuple[float, ...]): Pump intensities in units of |Lambda|^2, ascending.
            Defaults to AUDIT_LADDER.

    Returns:
        Report (dict[str, Any]): "rows" of the ladder, "summary" of measured and published constants.
    """

    derived = params.derive(nopo)
    lam = derived.lam
    scale = abs(lam) ** 2

    rows = []
    for rung in ladder:
        p = rung * scale
        exact = _series_v_min(lam, p, tol)
        limit = semiclassical.asymptotic_v_min(lam, p, tol)
        rows.append({
            "p_over_threshold": rung,
            "v_min": exact,
            "v_min_limit": limit.v_min,
            "gap": abs(exact - limit.v_min),
            "delta_n": limit.delta_n,
            "w": limit.w,
            })

    top = rows[-1]
    summary = {
        "v_min_limit": top["v_min"],
        "delta_n_limit": top["delta_n"],
        "w_limit": top["w"],
        "gap_decreasing": all(a["gap"] >= b["gap"] for a, b in zip(rows, rows[1:])),
        }

    try:
        summary["gaussian_delta_n"] = semiclassical.gaussian_delta_n(lam, ladder[-1] * scale)
    except errors.DomainError as e:
        logger.info("Gaussian dn skipped: %s", e)

    if derived.regime is params.Regime.MONOSTABLE:
        minimum = nearthreshold.exact_series_minimum(lam, tol)
        expansion = nearthreshold.expansion_params(lam)

        # The same rates with kappa halved
        halved = params.derive(replace(nopo, kappa=nopo.kappa / 2))
        halved_minimum = nearthreshold.exact_series_minimum(halved.lam, tol)

        summary.update({
            "s": expansion.s,
            "c": expansion.c,
            "argmin_over_ith": minimum.i_over_ith,
            "predicted_argmin_over_ith": expansion.i_min_over_ith,
            "min_offset": minimum.offset,
            "f1": minimum.offset / (expansion.c ** 3 * expansion.s),
            "offset_ratio": minimum.offset / halved_minimum.offset,
            })

    return {"rows": rows, "summary": summary, "published": PUBLISHED}
