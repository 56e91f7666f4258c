#!/usr/bin/env python3
"""Shared fixtures for the Nopomoments tests

S.D.G."""

import cmath
import math

import pytest

from nopomoments import params

LAM_REAL = 144 + 0j
"""Lambda of kappa = 0.5, gamma = 1, gamma3 = 18 at resonance"""

LAM_EIGHTH = cmath.rect(144, math.pi / 4)
"""Monostable Lambda with a large imaginary part"""

LAM_NEAR_INTERJACENT = cmath.rect(144, 0.49 * math.pi)
"""Monostable Lambda close to the interjacent line"""

FIGURE_RATES = {"kappa": 0.5, "gamma": 1.0, "gamma3": 18.0}
"""Rates shared by the figure presets"""


def figure_rates(delta: float, delta3: float | None = None, **extra) -> dict:
    """Figure rates at a detuning, delta3 = 2 delta unless given"""
    rates = dict(FIGURE_RATES, delta=delta, delta3=2 * delta if delta3 is None else delta3)
    rates.update(extra)
    return rates


@pytest.fixture
def monostable():
    """Delta = 1 figure parameters, Lambda = 128 - 160i"""
    return params.NopoParams(**figure_rates(1))


@pytest.fixture
def interjacent():
    """Delta = 3 figure parameters, Re Lambda = 0"""
    return params.NopoParams(**figure_rates(3))


@pytest.fixture
def bistable():
    """Delta = 7 figure parameters, Lambda = -640 - 1120i"""
    return params.NopoParams(**figure_rates(7))


@pytest.fixture
def resonant():
    """Figure rates with both detunings zero, Lambda = 144"""
    return params.NopoParams(**figure_rates(0))
