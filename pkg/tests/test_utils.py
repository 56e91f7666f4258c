#!/usr/bin/env python3
"""Tests for the numerical utilities

S.D.G."""

import math

import pytest

from nopomoments import utils
from nopomoments.errors import InvalidParams


def test_two_sum_is_exact():
    s, err = utils.two_sum(1e16, 1.0)
    assert s == 1e16
    assert err == 1.0


class TestCompensatedSum:
    """Neumaier accumulation"""

    def test_cancellation(self):
        acc = utils.CompensatedSum()
        acc.extend([1e16, 1.0, -1e16])
        assert acc.value == 1.0

    def test_many_small(self):
        acc = utils.CompensatedSum(1.0)
        acc.extend([1e-16] * 10_000)
        assert acc.value == pytest.approx(1.0 + 1e-12, rel=1e-15)

    def test_scale(self):
        acc = utils.CompensatedSum()
        acc.extend([3.0, 1e-17])
        acc.scale(0.5)
        assert acc.value == pytest.approx(1.5, rel=1e-16)
        assert sum(acc.parts) == acc.value

    def test_complex(self):
        acc = utils.ComplexCompensatedSum()
        for value in (1e16 + 1j, 1.0 - 1e16j, -1e16 + 1e16j):
            acc.add(value)
        assert acc.value == 1 + 1j


@pytest.mark.parametrize("angle, expected", [
    (0.0, 0.0),
    (-math.pi, math.pi),
    (math.pi, math.pi),
    (3 * math.pi / 2, -math.pi / 2),
    (-5 * math.pi / 2, -math.pi / 2),
    ])
def test_principal_angle(angle, expected):
    assert utils.principal_angle(angle) == pytest.approx(expected)


@pytest.mark.parametrize("value, text", [
    (None, ""),
    (True, "1"),
    (False, "0"),
    (0.1, "0.10000000000000001"),
    (2.0, "2"),
    (7, "7"),
    ("Monostable", "Monostable"),
    ])
def test_format_float(value, text):
    assert utils.format_float(value) == text


def test_format_float_round_trips():
    for value in (math.pi, 1 / 3, 6.02214076e23, -2.5e-300):
        assert float(utils.format_float(value)) == value


class TestParseConfig:
    """key = value files"""

    def test_parse(self):
        text = "# comment\n\nkappa = 0.5\n--phi-e = 0.1  # trailing\ngamma3=18\n"
        assert utils.parse_config(text) == {"kappa": "0.5", "phi_e": "0.1", "gamma3": "18"}

    def test_missing_equals(self):
        with pytest.raises(InvalidParams, match="cfg:2"):
            utils.parse_config("kappa = 1\nkappa 2\n", "cfg")

    def test_empty_key(self):
        with pytest.raises(InvalidParams):
            utils.parse_config(" = 3\n")
