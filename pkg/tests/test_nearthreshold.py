#!/usr/bin/env python3
"""Tests for the near threshold closed form

S.D.G."""

import numpy as np
import pytest

from nopomoments import nearthreshold, static
from nopomoments.errors import DomainError, NopoWarning

from conftest import LAM_NEAR_INTERJACENT, LAM_REAL

S = 1 / 12
"""|Lambda|^(-1/2) of LAM_REAL"""


class TestPolynomials:
    """The published f2 and f3"""

    def test_at_one(self):
        f2, f3 = nearthreshold.f_polynomials(1.0)
        assert f2 == pytest.approx(0.02421)
        assert f3 == pytest.approx(0.828)

    def test_at_zero(self):
        assert nearthreshold.f_polynomials(0.0) == pytest.approx((0.113, -2.219))

    def test_f3_changes_sign_once(self):
        f3 = np.array([nearthreshold.f_polynomials(c)[1] for c in np.linspace(0, 1, 101)])
        assert np.count_nonzero(np.diff(np.sign(f3))) == 1

    @pytest.mark.parametrize("c", [-0.1, 1.5])
    def test_out_of_range(self, c):
        with pytest.raises(DomainError):
            nearthreshold.f_polynomials(c)


class TestClosedForm:
    """Location, validity and value"""

    def test_location(self):
        assert nearthreshold.predicted_minimum_location(LAM_REAL) == pytest.approx(1 + 0.828 * S)

    def test_location_needs_monostable(self):
        with pytest.raises(DomainError):
            nearthreshold.predicted_minimum_location(-640 - 1120j)

    def test_valid_at_location(self):
        location = nearthreshold.predicted_minimum_location(LAM_REAL)
        assert nearthreshold.validity_check(LAM_REAL, location)

    def test_outside_window(self):
        location = nearthreshold.predicted_minimum_location(LAM_REAL)
        validity = nearthreshold.validity_check(LAM_REAL, location + 0.01)
        assert not validity
        assert validity.reason is nearthreshold.Invalidity.OUTSIDE_WINDOW

    @pytest.mark.parametrize("lam", [LAM_NEAR_INTERJACENT, 144j])
    def test_near_interjacent(self, lam):
        assert nearthreshold.validity_check(lam, 1.0).reason is nearthreshold.Invalidity.NEAR_INTERJACENT

    def test_not_monostable(self):
        assert nearthreshold.validity_check(-640 - 1120j, 1.0).reason is nearthreshold.Invalidity.NOT_MONOSTABLE

    def test_value_at_location(self):
        location = nearthreshold.predicted_minimum_location(LAM_REAL)
        value = nearthreshold.near_threshold_v_min(LAM_REAL, location)
        assert value == pytest.approx(0.5 + static.NearThreshold.f1_lower_bound * S)

    def test_quadratic_growth(self):
        location = nearthreshold.predicted_minimum_location(LAM_REAL)
        offset = 5e-4
        rise = nearthreshold.near_threshold_v_min(LAM_REAL, location + offset, f1=0.02) \
            - nearthreshold.near_threshold_v_min(LAM_REAL, location, f1=0.02)
        assert rise == pytest.approx(0.02421 / S * offset ** 2, rel=1e-3)

    def test_invalid_point_raises(self):
        with pytest.raises(DomainError):
            nearthreshold.near_threshold_v_min(LAM_REAL, 2.0)


class TestExactMinimum:
    """The exact series minimum against the closed form"""

    @pytest.fixture(scope="class")
    def minimum(self):
        return nearthreshold.exact_series_minimum(LAM_REAL)

    def test_location_band(self, minimum):
        centre = 1 + 0.828 * S
        assert centre - 3 * S ** 2 <= minimum.i_over_ith <= centre + 3 * S ** 2

    def test_offset_above_bound(self, minimum):
        assert minimum.offset >= static.NearThreshold.f1_lower_bound * S

    def test_offset_scaling(self, minimum):
        # Halving kappa quadruples Lambda and halves s
        halved = nearthreshold.exact_series_minimum(4 * LAM_REAL)
        assert 1.6 <= minimum.offset / halved.offset <= 2.4

    def test_calibration(self, minimum):
        assert nearthreshold.calibrate_f1(LAM_REAL) == pytest.approx(minimum.offset / S, rel=1e-6)

    def test_calibration_clamps(self, monkeypatch):
        low = nearthreshold.SeriesMinimum(i_over_ith=1.07, v_min=0.5 + 1e-4)
        monkeypatch.setattr(nearthreshold, "exact_series_minimum", lambda lam, tol: low)
        with pytest.warns(NopoWarning):
            f1 = nearthreshold.calibrate_f1(LAM_REAL)
        assert f1 == static.NearThreshold.f1_lower_bound
