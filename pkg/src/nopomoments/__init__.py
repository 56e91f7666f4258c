#!/usr/bin/env python3
"""
Nopomoments

Exact steady state moments and two-mode squeezing of a nondegenerate optical parametric oscillator

Copyright 2025 Wilbur Jaywright.

This file is part of Nopomoments.

Nopomoments is free software: you can redistribute it and/or modify it under the terms of the GNU Lesser General Public License as published by the Free Software Foundation, either version 3 of the License, or (at your option) any later version.

Nopomoments is distributed in the hope that it will be useful, but WITHOUT ANY WARRANTY; without even the implied warranty of MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the GNU Lesser General Public License for more details.

You should have received a copy of the GNU Lesser General Public License along with Nopomoments. If not, see <https://www.gnu.org/licenses/>.

The steady state of the oscillator with the pump mode eliminated is known in closed form as a series over the pair number j. This package evaluates that series and everything built on it, with some quality of life additions, such as:
- Log space summation with compensated accumulation, valid from zero pump to far above threshold, and a saddle point route for photon numbers the direct sum cannot reach.
- The phase optimized EPR variance without cancellation, even at 10^13 photons.
- An independent master equation solver in a truncated Fock basis to check the series against.

Modules exported by this package:

- `params`: Physical inputs, derived dimensionless parameters, regimes and thresholds.
- `series`: The exact moment series.
- `entangle`: EPR variance, its minimum and the inseparability verdict.
- `semiclassical`: Semiclassical photon number and the far above threshold asymptotics.
- `nearthreshold`: The near threshold closed form of the minimized variance.
- `oracle`: The truncated Fock basis master equation solver.
- `sweep`: Parameter sweeps and CSV output.
- `reports`: Point reports, the oracle comparison and the asymptotic audit.
- `cli`: The command line tool.
- `utils`: Compensated summation and other utility functions.
- `errors`: Error and warning classes.
- `static`: Numerical defaults and constants.

Example usage:

```
from nopomoments import Nopo, NopoParams

## Monostable oscillator a little above threshold
nopo = Nopo(NopoParams.from_es(2.85, kappa=0.5, gamma=1, gamma3=18, delta=1, delta3=2))

print(nopo.derived.regime)
## Monostable

print(nopo.n, nopo.v_min)
## Photon number per mode, and a minimized variance close to 0.5
```
S.D.G."""

from __future__ import annotations

from functools import cached_property

# Make all submodules available from base name
from . import (
    params,
    series,
    entangle,
    semiclassical,
    nearthreshold,
    oracle,
    sweep,
    reports,
    utils,
    errors,
    static,
)

from .errors import NopoError, NopoWarning
from .params import NopoParams, DerivedParams, Regime


class Nopo:
    """One parameter point, evaluated lazily and cached"""

    def __init__(self, nopo_params: NopoParams, tol: float = static.Series.tol):
        """One parameter point, evaluated lazily and cached.

    Args:
        nopo_params (NopoParams): The physical inputs.
        tol (float): Series tolerance.
            Defaults to static.Series.tol.
        """

        self.params = nopo_params
        self.tol = tol

    def __repr__(self) -> str:
        """String to represent this object"""
        return f"{type(self).__name__}({self.params!r})"

    @cached_property
    def derived(self) -> DerivedParams:
        """Dimensionless parameters, regime and thresholds"""
        return params.derive(self.params)

    @cached_property
    def moments(self) -> series.MomentSet:
        """Photon number and pair moment"""
        return series.moments(self.derived.lam, self.derived.p, self.derived.phi_e, self.tol)

    @cached_property
    def entanglement(self) -> entangle.EntanglementResult:
        """Minimized EPR variance and verdict"""
        return entangle.minimized_variance(self.moments)

    @cached_property
    def semiclassical(self) -> semiclassical.SemiclassicalPoint:
        """Semiclassical photon number and the quantum correction"""
        return semiclassical.semiclassical_point(self.derived.lam, self.derived.p, self.moments.stats)

    @property
    def n(self) -> float:
        """Mean photon number per mode"""
        return self.moments.n

    @property
    def pair_moment(self) -> complex:
        """<a1 a2>"""
        return self.moments.pair_moment

    @property
    def v_min(self) -> float:
        """Minimized EPR variance"""
        return self.entanglement.v_min

    def with_pump(self, amplitude: float) -> Nopo:
        """The same oscillator at another pump amplitude.

        Args:
            amplitude (float): The new |E|.

        Returns:
            Point (Nopo): A fresh, unevaluated point.
        """

        return Nopo(self.params.with_pump(amplitude), self.tol)
