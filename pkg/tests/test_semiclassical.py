#!/usr/bin/env python3
"""Tests for the semiclassical photon number and its quantum correction

S.D.G."""

import math

import pytest

from nopomoments import entangle, semiclassical, series
from nopomoments.errors import DomainError, InvalidParams

from conftest import LAM_EIGHTH, LAM_REAL

LADDER = (1e2, 1e3, 1e4)
"""Pump intensities in units of |Lambda|^2"""

MU_LADDER = (100, 400, 1600, 6400)
"""Values of 2 n_cl for the Gaussian estimate"""


class TestClassicalPhotonNumber:
    """The semiclassical branches"""

    def test_at_threshold(self):
        point = semiclassical.classical_photon_number(LAM_REAL, 20736.0)
        assert point.n_cl == 0
        assert point.branch is semiclassical.Branch.BELOW_THRESHOLD

    def test_above_threshold(self):
        point = semiclassical.classical_photon_number(LAM_REAL, 4 * 20736.0)
        assert point.n_cl == pytest.approx(72)
        assert point.mu == 144
        assert point.xi == pytest.approx(0, abs=1e-9)
        assert point.branch is semiclassical.Branch.ABOVE_THRESHOLD
        assert point.n_unstable is None

    def test_bistable_coexistence(self):
        lam = -640 - 1120j
        point = semiclassical.classical_photon_number(lam, 1.5e6)
        r = math.sqrt(1.5e6 - 1120 ** 2)
        assert point.n_cl == pytest.approx((640 + r) / 2)
        assert point.n_unstable == pytest.approx((640 - r) / 2)
        assert point.n_unstable > 0

    def test_negative_p(self):
        with pytest.raises(InvalidParams):
            semiclassical.classical_photon_number(LAM_REAL, -1.0)


class TestQuantumCorrection:
    """dn = n - n_cl"""

    def test_zero_pump(self):
        assert semiclassical.quantum_correction(LAM_REAL, 0.0) == 0.0

    def test_at_threshold(self):
        dn = semiclassical.quantum_correction(LAM_REAL, 20736.0)
        assert dn == pytest.approx(series.moments(LAM_REAL, 20736.0).n)
        assert 1 < dn < 144

    @pytest.mark.parametrize("lam", [LAM_REAL, LAM_EIGHTH])
    def test_far_above_limit(self, lam):
        dn = semiclassical.quantum_correction(lam, 1e4 * abs(lam) ** 2)
        assert dn == pytest.approx(-0.125, abs=5e-3)

    @pytest.mark.parametrize("lam", [LAM_REAL, LAM_EIGHTH])
    def test_small_against_n_cl(self, lam):
        point = semiclassical.semiclassical_point(lam, 1e4 * abs(lam) ** 2)
        assert abs(point.delta_n) / point.n_cl <= 1e-2

    def test_point_fills_correction(self):
        p = 9.0 * abs(LAM_REAL) ** 2
        point = semiclassical.semiclassical_point(LAM_REAL, p)
        assert point.delta_n == pytest.approx(series.moments(LAM_REAL, p).n - point.n_cl, abs=1e-9)


class TestGaussianDeltaN:
    """The Gaussian estimate of dn"""

    def test_matches_series(self):
        dn = semiclassical.gaussian_delta_n(LAM_REAL, 1e6)
        assert dn == pytest.approx(semiclassical.quantum_correction(LAM_REAL, 1e6), abs=1e-2)

    def test_limit(self):
        assert semiclassical.gaussian_delta_n(LAM_REAL, 1e4 * abs(LAM_REAL) ** 2) == pytest.approx(-0.125, abs=5e-3)

    def test_smallest_mu(self):
        # 2 n_cl = 100 exactly
        p = 244.0 ** 2
        point = semiclassical.classical_photon_number(LAM_REAL, p)
        assert point.mu == 100
        dn = semiclassical.gaussian_delta_n(LAM_REAL, p)
        assert math.isfinite(dn)
        assert dn == pytest.approx(semiclassical.quantum_correction(LAM_REAL, p), abs=1 / math.sqrt(100))

    def test_too_close_to_threshold(self):
        with pytest.raises(DomainError):
            semiclassical.gaussian_delta_n(LAM_REAL, 1.1 * abs(LAM_REAL) ** 2)

    def test_error_shrinks_with_mu(self):
        # 2 n_cl = mu exactly, xi = 0
        gaps = []
        for mu in MU_LADDER:
            p = (mu + 144.0) ** 2
            assert semiclassical.classical_photon_number(LAM_REAL, p).mu == mu
            exact = semiclassical.quantum_correction(LAM_REAL, p)
            gaps.append(abs(semiclassical.gaussian_delta_n(LAM_REAL, p) - exact))

        assert gaps == sorted(gaps, reverse=True)


class TestAsymptoticVMin:
    """Far above threshold limit"""

    @pytest.mark.parametrize("lam", [LAM_REAL, LAM_EIGHTH])
    def test_ladder(self, lam):
        gaps = []
        for rung in LADDER:
            p = rung * abs(lam) ** 2
            limit = semiclassical.asymptotic_v_min(lam, p)
            exact = entangle.minimized_variance(series.moments(lam, p)).v_min
            gaps.append(abs(exact - limit.v_min))

        assert exact == pytest.approx(0.75, abs=1e-2)
        assert limit.v_min == pytest.approx(0.75, abs=1e-2)
        assert limit.delta_n == pytest.approx(-0.125, abs=5e-3)
        assert gaps == sorted(gaps, reverse=True)

    def test_w_approaches_half(self):
        # The leading deviation is Re Lambda / (2R)
        top = semiclassical.asymptotic_v_min(LAM_REAL, 1e4 * abs(LAM_REAL) ** 2)
        higher = semiclassical.asymptotic_v_min(LAM_REAL, 1e6 * abs(LAM_REAL) ** 2)
        assert top.w == pytest.approx(0.5 / (1 - 1e-2), abs=1e-4)
        assert higher.w == pytest.approx(0.5, abs=1e-3)

    def test_pair_modulus_identity(self):
        p = 1e4 * abs(LAM_EIGHTH) ** 2
        limit = semiclassical.asymptotic_v_min(LAM_EIGHTH, p)
        modulus = abs(series.moments(LAM_EIGHTH, p).pair_moment)
        assert limit.pair_modulus == pytest.approx(modulus, rel=1e-6)

    def test_not_far_above(self):
        with pytest.raises(DomainError):
            semiclassical.asymptotic_v_min(LAM_REAL, 10 * abs(LAM_REAL) ** 2)
