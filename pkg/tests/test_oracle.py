#!/usr/bin/env python3
"""Tests for the truncated Fock master equation oracle

S.D.G."""

import numpy as np
import pytest

from nopomoments import entangle, oracle, params, reports, series
from nopomoments.errors import AccuracyGuard, InvalidParams, OracleMismatch, UnsupportedDetuning

from conftest import figure_rates

RESONANT_THRESHOLD = 144.0 ** 2
"""|Lambda|^2 of the resonant figure rates"""

GRID_CUTOFFS = {
    (0.1, 0.0): 10, (0.1, 1.0): 10,
    (0.5, 0.0): 25, (0.5, 1.0): 25,
    (1.0, 0.0): 30, (1.0, 1.0): 40,
    (1.5, 0.0): 50, (1.5, 1.0): 70,
    }
"""Starting cutoff by pump ratio and detuning, near where the tail mass falls below 1e-8"""


def resonant_at(ratio: float) -> params.NopoParams:
    """Resonant figure rates at p = ratio |Lambda|^2"""
    return params.NopoParams.from_p(ratio * RESONANT_THRESHOLD, **figure_rates(0))


@pytest.fixture(scope="module")
def full_state():
    """Steady state in the unreduced basis, a little below threshold"""
    config = oracle.OracleConfig(cutoff=10, reduced=False)
    return oracle.steady_state(oracle.build_generator(resonant_at(0.3), config))


class TestConfig:
    """Settings validation"""

    @pytest.mark.parametrize("kwargs", [
        {"cutoff": 3},
        {"cutoff": 20, "reduced": False},
        {"solver_tol": 1e-3},
        {"cutoff": 40, "max_cutoff_scan": 30},
        {"cutoff": 21, "method": "Qutip"},
        ])
    def test_rejects(self, kwargs):
        with pytest.raises(InvalidParams):
            oracle.OracleConfig(**kwargs)

    def test_method_name(self):
        assert oracle.OracleConfig(method="TimeStepping").method is oracle.Method.TIME_STEPPING

    def test_detuned_pump(self):
        with pytest.raises(UnsupportedDetuning):
            oracle.OracleRates.from_params(params.NopoParams(**figure_rates(1)))


class TestBasis:
    """Flat indexing of density matrix elements"""

    @pytest.mark.parametrize("reduced", [True, False])
    def test_index_covers_basis(self, reduced):
        basis = oracle.FockBasis(6, reduced)
        flat = basis.index(basis.n1, basis.n2, basis.m1, basis.m2)
        assert np.array_equal(flat, np.arange(basis.size))

    def test_reduced_drops_other_blocks(self):
        basis = oracle.FockBasis(6)
        assert basis.index(1, 0, 0, 0) == -1
        assert basis.index(7, 0, 7, 0) == -1
        assert np.all(basis.n1 - basis.n2 == basis.m1 - basis.m2)


class TestGenerator:
    """Assembly and the drift gate"""

    def test_gate_passes(self):
        nopo = params.NopoParams.from_p(5000.0, **figure_rates(1, delta3=0))
        oracle.drift_gate(oracle.OracleRates.from_params(nopo))

    def test_gate_catches_wrong_loss(self, monkeypatch):
        original = oracle._h_diag
        monkeypatch.setattr(
            oracle, "_h_diag",
            lambda gamma, delta, loss, n1, n2: original(gamma, delta, 2 * loss, n1, n2),
            )
        with pytest.raises(OracleMismatch):
            oracle.build_generator(resonant_at(0.1), oracle.OracleConfig(cutoff=8))

    def test_reference_gate_passes(self):
        nopo = params.NopoParams.from_p(5000.0, **figure_rates(1, delta3=0))
        oracle.reference_gate(oracle.OracleRates.from_params(nopo))

    def test_reference_gate_catches_wrong_loss(self, monkeypatch):
        original = oracle._h_diag
        monkeypatch.setattr(
            oracle, "_h_diag",
            lambda gamma, delta, loss, n1, n2: original(gamma, delta, 2 * loss, n1, n2),
            )
        with pytest.raises(OracleMismatch):
            oracle.reference_gate(oracle.OracleRates.from_params(resonant_at(0.1)))

    def test_qutip_operators(self):
        rates = oracle.OracleRates.from_params(resonant_at(0.1))
        H, c_ops = oracle.qutip_operators(rates, 5)
        assert H.shape == (36, 36)
        assert H.isherm
        assert len(c_ops) == 3

    def test_vacuum_without_pump(self):
        state = oracle.steady_state(oracle.build_generator(resonant_at(0.0), oracle.OracleConfig(cutoff=6)))
        assert state.rho[state.basis.vacuum_index()] == pytest.approx(1, abs=1e-12)
        assert state.n == pytest.approx(0, abs=1e-12)
        assert oracle.oracle_v_min(state) == pytest.approx(1, abs=1e-12)


class TestSteadyState:
    """Symmetries and agreement of the solution routes"""

    def test_off_block_elements_vanish(self, full_state):
        basis = full_state.basis
        off_block = (basis.n1 - basis.n2) != (basis.m1 - basis.m2)
        assert np.max(np.abs(full_state.rho[off_block])) <= 1e-10

    @pytest.mark.parametrize("indices", [
        (k, l, m, n)
        for k in range(3) for l in range(3) for m in range(3) for n in range(3)
        if k + l + m + n <= 4 and k - l != m - n
        ])
    def test_selection_rule(self, full_state, indices):
        assert abs(oracle.oracle_moment(full_state, *indices)) <= 1e-8

    def test_mode_symmetry(self, full_state):
        n1 = oracle.oracle_moment(full_state, 1, 1, 0, 0)
        n2 = oracle.oracle_moment(full_state, 0, 0, 1, 1)
        assert n1 == pytest.approx(n2, abs=1e-10)

    def test_quality_figures(self):
        state = oracle.converged_steady_state(resonant_at(0.1), oracle.OracleConfig(cutoff=10))
        assert state.trace == pytest.approx(1)
        assert state.residual <= 1e-10
        assert state.cutoff_tail_mass <= 1e-8
        assert state.hermiticity_defect <= 1e-10
        assert state.min_eigenvalue >= -1e-8

    def test_routes_agree(self):
        nopo = resonant_at(0.1)
        null = oracle.steady_state(oracle.build_generator(nopo, oracle.OracleConfig(cutoff=8)))
        stepped = oracle.steady_state(oracle.build_generator(
            nopo, oracle.OracleConfig(cutoff=8, method=oracle.Method.TIME_STEPPING)))
        assert stepped.n == pytest.approx(null.n, abs=1e-8)
        assert stepped.method is oracle.Method.TIME_STEPPING

    @pytest.mark.parametrize("reduced", [True, False])
    def test_qutip_route_agrees(self, reduced):
        nopo = resonant_at(0.1)
        null = oracle.steady_state(oracle.build_generator(nopo, oracle.OracleConfig(cutoff=8, reduced=reduced)))
        dense = oracle.steady_state(oracle.build_generator(
            nopo, oracle.OracleConfig(cutoff=8, reduced=reduced, method=oracle.Method.QUTIP)))
        assert dense.method is oracle.Method.QUTIP
        assert dense.n == pytest.approx(null.n, abs=1e-8)
        assert dense.pair_moment == pytest.approx(null.pair_moment, abs=1e-8)

    def test_cutoff_raise_settles(self):
        nopo = resonant_at(0.1)
        lower = oracle.steady_state(oracle.build_generator(nopo, oracle.OracleConfig(cutoff=10)))
        upper = oracle.steady_state(oracle.build_generator(nopo, oracle.OracleConfig(cutoff=15)))
        assert upper.n == pytest.approx(lower.n, rel=1e-6)
        assert upper.pair_moment == pytest.approx(lower.pair_moment, rel=1e-6)

    def test_scan_step(self):
        assert oracle._scan_step(None, 10, 1e-3) == 5
        # Tail mass not falling, no extrapolation
        assert oracle._scan_step((10, 1e-4), 15, 2e-4) == 5
        # Decay by 50 over 5 predicts about 12.7 more
        assert oracle._scan_step((10, 1e-2), 15, 2e-4) == 15

    def test_accuracy_guard(self, full_state):
        with pytest.raises(AccuracyGuard):
            oracle.oracle_moment(full_state, 3, 3, 3, 0)
        with pytest.raises(AccuracyGuard):
            oracle.oracle_moment(full_state, 5, 0, 0, 0)
        with pytest.raises(InvalidParams):
            oracle.oracle_moment(full_state, -1, 0, 0, 0)


class TestAgainstSeries:
    """Series moments against the oracle"""

    def test_small_pump(self):
        nopo = resonant_at(0.1)
        state = oracle.converged_steady_state(nopo, oracle.OracleConfig(cutoff=10))
        derived = params.derive(nopo)
        moments = series.moments(derived.lam, derived.p, derived.phi_e)
        assert state.n == pytest.approx(moments.n, rel=1e-4)
        assert state.pair_moment == pytest.approx(moments.pair_moment, rel=1e-4)
        assert oracle.oracle_v_min(state) == pytest.approx(entangle.minimized_variance(moments).v_min, abs=1e-4)

    def test_check_passes(self):
        report = reports.oracle_check(resonant_at(0.1), oracle.OracleConfig(cutoff=10))
        assert report["summary"]["passed"]

    def test_flipped_pump_fails(self):
        report = reports.oracle_check(resonant_at(0.1), oracle.OracleConfig(cutoff=10, flip_pump_sign=True))
        passed = {row["quantity"]: row["passed"] for row in report["rows"]}
        assert not report["summary"]["passed"]
        assert passed["n"]
        assert not passed["pair"]

    def test_general_moments(self):
        nopo = resonant_at(0.1)
        state = oracle.converged_steady_state(nopo, oracle.OracleConfig(cutoff=10))
        derived = params.derive(nopo)
        for k, l in ((1, 0), (0, 1), (1, 2), (2, 1)):
            expected = series.general_moment_kl(derived.lam, derived.epsilon, k, l)
            assert oracle.oracle_moment(state, k, l, k, l) == pytest.approx(expected, rel=1e-3)

    @pytest.mark.parametrize("delta", [0.0, 1.0])
    @pytest.mark.parametrize("ratio", [
        0.1,
        pytest.param(0.5, marks=pytest.mark.slow),
        pytest.param(1.0, marks=pytest.mark.slow),
        pytest.param(1.5, marks=pytest.mark.slow),
        ])
    def test_grid(self, delta, ratio):
        rates = figure_rates(delta, delta3=0)
        lam = params.derive(params.NopoParams(**rates)).lam
        nopo = params.NopoParams.from_p(ratio * abs(lam) ** 2, **rates)
        report = reports.oracle_check(nopo, oracle.OracleConfig(cutoff=GRID_CUTOFFS[ratio, delta]))
        assert report["summary"]["passed"], report["rows"]
