#!/usr/bin/env python3
"""Physical parameters of the oscillator

Holds the physical inputs, derives the dimensionless quantities every other
module consumes, classifies the operating regime and computes thresholds.

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
from dataclasses import dataclass, replace
from enum import StrEnum
import math
import warnings

from . import errors
from . import static


class Regime(StrEnum):
    """Operating regime, from the sign of Re Lambda"""

    MONOSTABLE = "Monostable"
    INTERJACENT = "Interjacent"
    BISTABLE = "Bistable"


@dataclass(frozen=True)
class NopoParams:
    """Physical inputs of the oscillator, in rate units"""

    kappa: float
    """Coupling constant"""

    gamma: float
    """Decay rate of each subharmonic mode"""

    gamma3: float
    """Decay rate of the pump mode"""

    delta: float = 0.0
    """Subharmonic detuning"""

    delta3: float = 0.0
    """Pump detuning"""

    pump_amplitude: float = 0.0
    """Pump field amplitude |E|"""

    pump_phase: float = 0.0
    """Pump phase in radians"""

    def __post_init__(self):
        for name in ("kappa", "gamma", "gamma3"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise errors.InvalidParams(f"{name} must be positive and finite, got {value!r}")

        for name in ("delta", "delta3", "pump_phase"):
            if not math.isfinite(getattr(self, name)):
                raise errors.InvalidParams(f"{name} must be finite, got {getattr(self, name)!r}")

        if not (math.isfinite(self.pump_amplitude) and self.pump_amplitude >= 0):
            raise errors.InvalidParams(
                f"pump_amplitude must be non-negative and finite, got {self.pump_amplitude!r}")

        # The pump mode is eliminated adiabatically
        if self.gamma3 / self.gamma < static.Regime.adiabatic_ratio_min:
            warnings.warn(
                f"gamma3/gamma = {self.gamma3 / self.gamma:g} is below "
                f"{static.Regime.adiabatic_ratio_min:g}, the pump elimination is questionable",
                errors.NopoWarning,
                stacklevel=3,
                )

    @property
    def p_per_es2(self) -> float:
        """The factor (gamma*gamma3/kappa^2)^2 taking E_s^2 to p"""
        return (self.gamma * self.gamma3 / self.kappa ** 2) ** 2

    @classmethod
    def from_es(cls, es: float, **rates) -> NopoParams:
        """Build parameters from the dimensionless pump amplitude.

        Args:
            es (float): E_s = 2 kappa |E| / (gamma gamma3).
            **rates: The remaining NopoParams fields.

        Returns:
            Params (NopoParams): The parameters.
        """

        if not (math.isfinite(es) and es >= 0):
            raise errors.InvalidParams(f"es must be non-negative and finite, got {es!r}")

        amplitude = es * rates["gamma"] * rates["gamma3"] / (2 * rates["kappa"])
        return cls(pump_amplitude=amplitude, **rates)

    @classmethod
    def from_p(cls, p: float, **rates) -> NopoParams:
        """Build parameters from the scaled pump intensity.

        Args:
            p (float): p = 4 |E|^2 / kappa^2.
            **rates: The remaining NopoParams fields.

        Returns:
            Params (NopoParams): The parameters.
        """

        if not (math.isfinite(p) and p >= 0):
            raise errors.InvalidParams(f"p must be non-negative and finite, got {p!r}")

        return cls(pump_amplitude=rates["kappa"] * math.sqrt(p) / 2, **rates)

    def with_pump(self, amplitude: float) -> NopoParams:
        """Copy with another pump amplitude.

        Args:
            amplitude (float): The new |E|.

        Returns:
            Params (NopoParams): The copy.
        """

        return replace(self, pump_amplitude=amplitude)

    def rates(self) -> dict[str, float]:
        """Every field except the pump amplitude, as keyword arguments"""
        return {
            "kappa": self.kappa,
            "gamma": self.gamma,
            "gamma3": self.gamma3,
            "delta": self.delta,
            "delta3": self.delta3,
            "pump_phase": self.pump_phase,
            }


@dataclass(frozen=True)
class ThresholdSet:
    """Generation thresholds of one parameter set"""

    p_mono: float
    """Monostable threshold |Lambda|^2"""

    p_bistable_lower: float
    """Bistable threshold (Im Lambda)^2"""

    p_bistable_upper: float
    """Upper end of the zero solution stability, |Lambda|^2"""

    e_threshold: float
    """|gammabar gammabar3| / kappa, in field amplitude units"""

    es_threshold: float
    """The same point in E_s units"""


@dataclass(frozen=True)
class DerivedParams:
    """Dimensionless quantities derived from NopoParams"""

    params: NopoParams
    """The physical inputs"""

    gamma_bar: complex
    """gamma - i delta"""

    gamma_bar3: complex
    """gamma3 - i delta3"""

    lam: complex
    """Lambda = 2 gammabar gammabar3 / kappa^2"""

    epsilon: complex
    """E / kappa, carrying the pump phase"""

    p: float
    """Scaled pump intensity |2 epsilon|^2"""

    es: float
    """Dimensionless pump amplitude 2 kappa |E| / (gamma gamma3)"""

    regime: Regime
    """Operating regime"""

    thresholds: ThresholdSet
    """Generation thresholds"""

    @property
    def phi_e(self) -> float:
        """Pump phase"""
        return self.params.pump_phase

    @property
    def adiabatic_ratio(self) -> float:
        """gamma3 / gamma"""
        return self.params.gamma3 / self.params.gamma

    @property
    def zero_branch_stable(self) -> bool:
        """Is the zero semiclassical solution still stable at this pump?"""
        return self.p < self.thresholds.p_bistable_upper

    @property
    def i_over_ith(self) -> float:
        """Pump intensity relative to the monostable threshold, p / |Lambda|^2"""
        return self.p / self.thresholds.p_mono


def classify_regime(lam: complex) -> Regime:
    """Classify the regime from Lambda.

    Args:
        lam (complex): Lambda.

    Returns:
        Regime (Regime): Monostable for Re Lambda > 0, Bistable for < 0,
            Interjacent within the relative tolerance of zero.
    """

    if abs(lam.real) <= static.Regime.interjacent_rel_tol * abs(lam):
        return Regime.INTERJACENT
    if lam.real > 0:
        return Regime.MONOSTABLE
    return Regime.BISTABLE


def thresholds(derived: DerivedParams) -> ThresholdSet:
    """Compute the generation thresholds.

    Args:
        derived (DerivedParams): Derived parameters. Only lam and params are read.

    Returns:
        Thresholds (ThresholdSet): The thresholds.
    """

    return _thresholds(derived.params, derived.gamma_bar, derived.gamma_bar3, derived.lam)


def _thresholds(params: NopoParams, gamma_bar: complex, gamma_bar3: complex, lam: complex) -> ThresholdSet:
    modulus = abs(gamma_bar * gamma_bar3)
    return ThresholdSet(
        p_mono=abs(lam) ** 2,
        p_bistable_lower=lam.imag ** 2,
        p_bistable_upper=abs(lam) ** 2,
        e_threshold=modulus / params.kappa,
        es_threshold=2 * modulus / (params.gamma * params.gamma3),
        )


def derive(params: NopoParams) -> DerivedParams:
    """Derive the dimensionless quantities.

    Args:
        params (NopoParams): Physical inputs.

    Returns:
        Derived (DerivedParams): Lambda, epsilon, p, E_s, regime and thresholds.
    """

    if not isinstance(params, NopoParams):
        raise errors.InvalidParams(f"Expected NopoParams, got {type(params).__name__}")

    gamma_bar = complex(params.gamma, -params.delta)
    gamma_bar3 = complex(params.gamma3, -params.delta3)
    lam = 2 * gamma_bar * gamma_bar3 / params.kappa ** 2
    epsilon = cmath.rect(params.pump_amplitude / params.kappa, params.pump_phase)

    return DerivedParams(
        params=params,
        gamma_bar=gamma_bar,
        gamma_bar3=gamma_bar3,
        lam=lam,
        epsilon=epsilon,
        p=4 * params.pump_amplitude ** 2 / params.kappa ** 2,
        es=2 * params.kappa * params.pump_amplitude / (params.gamma * params.gamma3),
        regime=classify_regime(lam),
        thresholds=_thresholds(params, gamma_bar, gamma_bar3, lam),
        )
