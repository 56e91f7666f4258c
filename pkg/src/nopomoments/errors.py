#!/usr/bin/env python3
"""Nopomoments error and warning classes

Every failure a caller can trigger raises a subclass of NopoError. Each class
carries the process exit code the command line tool uses for it.

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


class NopoError(Exception):
    """Base class for all Nopomoments errors"""

    exit_code = 1
    """Process exit code used by the command line tool"""


class InvalidParams(NopoError, ValueError):
    """Input values outside what the model accepts"""

    exit_code = 2


class PoleInput(InvalidParams):
    """Lambda + 1 + j is exactly zero for some j, the series is undefined"""


class DegenerateInput(InvalidParams):
    """An operation got p = 0 or n = 0 where it divides by them"""


class DomainError(InvalidParams):
    """Inputs are outside the validity domain of an approximation"""


class UndefinedPhase(InvalidParams):
    """The phase of an exactly vanishing pair moment was requested"""


class UnsupportedDetuning(InvalidParams):
    """The master equation oracle only covers a resonant pump mode"""


class AccuracyGuard(InvalidParams):
    """Moment indices too large for the truncated Fock basis"""


class Nonconvergence(NopoError, ArithmeticError):
    """A numerical procedure did not reach its tolerance"""

    exit_code = 3


class SolverFailure(Nonconvergence):
    """The steady state solver stagnated"""


class CutoffInsufficient(Nonconvergence):
    """The Fock cutoff scan hit its ceiling with too much tail population"""


class OracleMismatch(NopoError):
    """Series and master equation values disagree beyond tolerance"""

    exit_code = 4


class NopoWarning(UserWarning):
    """Soft problems with the inputs or an approximation"""
