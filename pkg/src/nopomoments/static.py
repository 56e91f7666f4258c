#!/usr/bin/env python3
"""Nopomoments static variable definitions

Provides the numerical defaults and fixed constants that, if changed, would
need to change globally.

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


class Regime:
    """Regime classification and model validity"""

    interjacent_rel_tol = 1e-9
    """|Re Lambda| at or below this times |Lambda| counts as interjacent"""

    adiabatic_ratio_min = 10.0
    """gamma3/gamma below this triggers the adiabatic elimination warning"""


class Series:
    """Defaults for the moment series summation"""

    tol = 1e-12
    """Default relative tail tolerance"""

    tol_max = 1e-3
    """Tolerances must be strictly below this"""

    max_terms = 10 ** 7
    """Direct summation term ceiling"""

    chunk = 1024
    """Terms produced per vectorized step"""

    stop_factor = 1e-3
    """A term counts as negligible below tol times this, relative to the largest"""

    extension = 10.0
    """Terms summed past the stop point, in units of sqrt(peak + 10)"""

    max_order = 30
    """Largest moment index accepted by the general moment series"""

    saddle_window = 12.0
    """The saddle route needs this many standard deviations above j = 0"""


class Entangle:
    """Constants for the inseparability evaluation"""

    phase_limit = 1e-300
    """Below this |<a1 a2>| the phase comes from the small-p analytic limit"""


class Semiclassical:
    """Constants for the semiclassical asymptotics"""

    min_mu = 100
    """Smallest integer part of 2 n_cl the Gaussian delta n accepts"""

    window = 12.0
    """Gaussian window half width, in units of sqrt(mu)"""

    far_above = 100.0
    """asymptotic_v_min needs p at least this times |Lambda|^2"""


class NearThreshold:
    """Coefficients and bounds of the near threshold closed form"""

    f2_coefficients = (0.113, 0.00221, -0.330, 0.371, -0.132)
    """f2(c) polynomial coefficients, ascending powers of c"""

    f3_coefficients = (-2.219, 0.217, 2.83)
    """f3(c) polynomial coefficients, ascending powers of c"""

    f1_lower_bound = 0.0164
    """Published lower bound of the offset coefficient f1(c)"""

    much_greater = 10.0
    """Factor standing in for "much greater" in the validity check"""

    search_halfwidth = 0.5
    """Half width in I/I_th of the grid searched for the exact minimum"""

    search_points = 201
    """Coarse grid size of the exact minimum search"""


class Oracle:
    """Defaults for the truncated Fock master equation solver"""

    cutoff = 30
    """Default photon number cutoff per mode"""

    cutoff_min = 4
    """Smallest accepted cutoff"""

    full_cutoff_max = 16
    """Largest cutoff for which unreduced storage is allowed"""

    solver_tol = 1e-10
    """Default residual tolerance"""

    solver_tol_range = (1e-14, 1e-6)
    """Accepted residual tolerance range"""

    max_cutoff_scan = 80
    """Default cutoff ceiling of a convergence scan"""

    scan_step = 5
    """Cutoff increment of a convergence scan, and the granularity of its extrapolated jumps"""

    tail_mass = 1e-8
    """Largest boundary population of an accepted solution"""

    max_order = 8
    """Largest k + l + m + n for oracle moments"""

    direct_limit = 120_000
    """Above this many unknowns the iterative solver is used"""

    time_step = 1e3
    """Implicit Euler step of the time stepping route, in units of 1/gamma"""

    max_steps = 10_000
    """Step limit of the time stepping route"""

    gmres_restart = 50
    """LGMRES inner iterations per restart"""

    gmres_maxiter = 2000
    """LGMRES outer iteration limit"""

    ilu_drop_tol = 1e-5
    """Incomplete LU drop tolerance of the iterative preconditioner"""

    ilu_fill_factor = 20
    """Incomplete LU fill factor of the iterative preconditioner"""

    gate_tol = 1e-9
    """Relative residual accepted by the drift consistency gate"""

    gate_cutoff = 8
    """Cutoff of the unreduced basis the drift gate runs in"""

    gate_seed = 20250101
    """Seed of the random test state of the drift gate"""

    reference_cutoff = 4
    """Cutoff of the unreduced basis compared with the qutip Liouvillian"""

    qutip_cutoff_max = 20
    """Largest cutoff accepted by the Qutip route"""

    defect_max = 1e-10
    """Largest hermiticity defect of an accepted solution"""

    eigenvalue_min = -1e-8
    """Smallest eigenvalue of an accepted solution"""


class Tolerances:
    """Pass criteria of the series against oracle comparison"""

    n_and_pair = 1e-4
    """Relative tolerance for n and <a1 a2>"""

    higher_moments = 1e-3
    """Relative tolerance for the higher photon number moments"""

    v_min = 1e-4
    """Absolute tolerance for V_min"""

    selection_rule = 1e-8
    """Largest moment allowed where the selection rule says zero"""


class Output:
    """Formatting of emitted data"""

    text_encoding = "utf-8"
    """Encoding of every file the CLI writes"""

    float_format = "{:.17g}"
    """Round trip format for floats"""

    metadata_prefix = "# "
    """Prefix of the metadata line above a CSV header"""

    sweep_columns = (
        "es", "p", "n", "n_cl", "delta_n", "v_min", "theta", "regime",
        "method", "tail_bound",
        )
    """Default sweep columns, in order"""

    all_columns = sweep_columns + (
        "n_scaled", "pair_re", "pair_im", "theta_sum", "entangled",
        "p_dn_dp", "error",
        )
    """Every column a sweep can emit"""

    max_count = 10 ** 6
    """Largest sweep grid"""


class Presets:
    """Figure presets shipped as config files"""

    package = "nopomoments.presets"
    """Package holding the preset files"""

    figures = {
        "fig1": ("fig1_d1.cfg", "fig1_d3.cfg", "fig1_d7.cfg"),
        "fig2": ("fig2_d1.cfg", "fig2_d3.cfg", "fig2_d7.cfg"),
        "fig3": ("fig3_k05.cfg", "fig3_k1e-6.cfg"),
        "fig4": ("fig4_d1.cfg", "fig4_d3.cfg", "fig4_d7.cfg"),
        }
    """Preset files per figure, one output file each"""
