#!/usr/bin/env python3
"""Tests for the EPR variance and the inseparability verdict

S.D.G."""

import cmath
from dataclasses import replace
import math

import numpy as np
import pytest

from nopomoments import entangle, params, series
from nopomoments.errors import UndefinedPhase

from conftest import LAM_EIGHTH, LAM_REAL, figure_rates

PHASES = np.linspace(-math.pi, math.pi, 7)


@pytest.fixture
def squeezed():
    """Moments a little above the monostable threshold"""
    return series.moments(LAM_EIGHTH, 1.1 * abs(LAM_EIGHTH) ** 2, phi_e=0.4)


class TestVariance:
    """EPR variance at given phases"""

    @pytest.mark.parametrize("theta1", PHASES)
    @pytest.mark.parametrize("theta2", PHASES)
    def test_vacuum_level(self, theta1, theta2):
        vacuum = series.moments(LAM_REAL, 0.0)
        assert entangle.variance(theta1, theta2, vacuum) == 1

    def test_minimizing_phases(self, squeezed):
        result = entangle.minimized_variance(squeezed)
        best = cmath.phase(squeezed.pair_moment)
        assert entangle.variance(best - 0.3, 0.3, squeezed) == pytest.approx(result.v_min, abs=1e-9)
        assert result.theta_sum == pytest.approx(best)

    def test_anti_squeezed(self, squeezed):
        best = cmath.phase(squeezed.pair_moment)
        assert entangle.variance(best + math.pi, 0.0, squeezed) == pytest.approx(
            entangle.anti_squeezed_variance(squeezed), rel=1e-12)

    @pytest.mark.parametrize("theta1", PHASES)
    def test_opposite_phases_sum(self, squeezed, theta1):
        total = entangle.variance(theta1, 0.2, squeezed) + entangle.variance(theta1 + math.pi, 0.2, squeezed)
        assert total == pytest.approx(2 * (1 + 2 * squeezed.n), rel=1e-12)

    @pytest.mark.parametrize("theta1", PHASES)
    def test_minimum_is_lowest(self, squeezed, theta1):
        v_min = entangle.minimized_variance(squeezed).v_min
        assert entangle.variance(theta1, 0.1, squeezed) >= v_min - 1e-12


class TestMinimizedVariance:
    """Phase optimized variance"""

    def test_vacuum(self):
        result = entangle.minimized_variance(series.moments(LAM_REAL, 0.0))
        assert result.v_min == 1
        assert not result.entangled_sufficient
        assert result.verdict is entangle.Verdict.INCONCLUSIVE
        assert result.phase_from_limit

    def test_far_above_threshold(self):
        for lam in (LAM_REAL, LAM_EIGHTH):
            result = entangle.minimized_variance(series.moments(lam, 1e4 * abs(lam) ** 2))
            assert result.v_min == pytest.approx(0.75, abs=1e-2)
            assert result.verdict is entangle.Verdict.ENTANGLED

    def test_figure_minimum(self):
        # Delta = 1 near the squeezing optimum
        nopo = params.NopoParams.from_es(2.85, **figure_rates(1))
        derived = params.derive(nopo)
        result = entangle.minimized_variance(series.moments(derived.lam, derived.p))
        assert 0.5 <= result.v_min <= 0.53

    @pytest.mark.parametrize("ratio", [1e-3, 0.1, 1.0, 10.0])
    def test_physicality(self, ratio):
        moments = series.moments(LAM_EIGHTH, ratio * abs(LAM_EIGHTH) ** 2)
        assert entangle.cauchy_schwarz_margin(moments) >= 0
        assert entangle.minimized_variance(moments).v_min >= 0


class TestRelativePhase:
    """Theta = arg<a1 a2> - phi_e"""

    def test_small_pump_limit(self):
        moments = series.moments(LAM_EIGHTH, 1e-6 * abs(LAM_EIGHTH) ** 2, phi_e=0.7)
        assert entangle.relative_phase(moments) == pytest.approx(-cmath.phase(LAM_EIGHTH + 1), abs=1e-3)

    def test_large_pump_limit(self):
        moments = series.moments(LAM_EIGHTH, 1e4 * abs(LAM_EIGHTH) ** 2)
        assert abs(entangle.relative_phase(moments)) <= 1e-2

    def test_pump_phase_cancels(self):
        p = 0.8 * abs(LAM_EIGHTH) ** 2
        plain = entangle.relative_phase(series.moments(LAM_EIGHTH, p))
        shifted = entangle.relative_phase(series.moments(LAM_EIGHTH, p, phi_e=2.0))
        assert shifted == pytest.approx(plain, abs=1e-12)

    def test_underflowed_pair(self):
        moments = replace(series.moments(LAM_EIGHTH, 1e-3), pair_moment=0j)
        assert entangle.relative_phase(moments) == pytest.approx(-cmath.phase(LAM_EIGHTH + 1))
        assert entangle.minimized_variance(moments).phase_from_limit

    def test_undefined_at_zero_pump(self):
        with pytest.raises(UndefinedPhase):
            entangle.relative_phase(series.moments(LAM_EIGHTH, 0.0))

    def test_bistable_phase_jump(self, bistable):
        derived = params.derive(bistable)
        window = np.linspace(derived.thresholds.p_bistable_lower, derived.thresholds.p_bistable_upper, 41)
        thetas = [entangle.relative_phase(series.moments(derived.lam, float(p))) for p in window]
        assert np.sum(np.abs(np.diff(np.unwrap(thetas)))) > 1
