#!/usr/bin/env python3
"""Truncated Fock basis master equation oracle

Solves the steady state of the two-mode master equation left after the pump
mode is eliminated,

    d rho/dt = -i[H, rho] + gamma sum_k (2 a_k rho a_k^+ - a_k^+ a_k rho - rho a_k^+ a_k)
               + Gamma (2 A rho A^+ - A^+ A rho - rho A^+ A),

with A = a1 a2, Gamma = kappa^2 / gamma3, H = -delta (n1 + n2) +
i(lambda a1^+ a2^+ - lambda* a1 a2) and lambda = kappa E / gamma3. Density
matrix elements <n1, n2| rho |m1, m2> are stored as a flat vector. The
reduced basis keeps only elements with n1 - n2 = m1 - m2, which the phase
symmetry of the steady state allows; the full basis keeps every element and
is limited to small cutoffs. The hand assembled generator is compared with
the Liouvillian qutip builds from the same operators before any solve.

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
from dataclasses import dataclass, field, replace
from enum import StrEnum
import logging
import math

import numpy as np
import qutip
from scipy import sparse
from scipy.sparse import csgraph
from scipy.sparse import linalg as splinalg
from scipy.special import gammaln

from . import errors
from . import params
from . import static

logger = logging.getLogger(__name__)


class Method(StrEnum):
    """Steady state solution method"""

    NULL_SPACE = "NullSpace"
    TIME_STEPPING = "TimeStepping"
    QUTIP = "Qutip"


@dataclass(frozen=True)
class OracleConfig:
    """Settings of the master equation solver"""

    cutoff: int = static.Oracle.cutoff
    """Largest photon number per mode"""

    solver_tol: float = static.Oracle.solver_tol
    """Largest accepted backward error of the steady state"""

    max_cutoff_scan: int = static.Oracle.max_cutoff_scan
    """Cutoff ceiling of a convergence scan"""

    method: Method = Method.NULL_SPACE
    """NullSpace, TimeStepping, or Qutip for the dense operator route"""

    reduced: bool = True
    """Store only elements allowed by the phase symmetry?"""

    flip_pump_sign: bool = False
    """Negate lambda, a deliberately wrong generator for negative controls"""

    def __post_init__(self):
        if not (isinstance(self.cutoff, int) and static.Oracle.cutoff_min <= self.cutoff):
            raise errors.InvalidParams(
                f"cutoff must be an integer of at least {static.Oracle.cutoff_min}, got {self.cutoff!r}")

        low, high = static.Oracle.solver_tol_range
        if not low <= self.solver_tol <= high:
            raise errors.InvalidParams(f"solver_tol must be in [{low:g}, {high:g}], got {self.solver_tol!r}")

        if self.max_cutoff_scan < self.cutoff:
            raise errors.InvalidParams(
                f"max_cutoff_scan {self.max_cutoff_scan} is below the cutoff {self.cutoff}")

        if not self.reduced and self.cutoff > static.Oracle.full_cutoff_max:
            raise errors.InvalidParams(
                f"Unreduced storage is limited to cutoff <= {static.Oracle.full_cutoff_max}, got {self.cutoff}")

        # Accept the plain string names too
        object.__setattr__(self, "method", Method(self.method))

        if self.method is Method.QUTIP and self.cutoff > static.Oracle.qutip_cutoff_max:
            raise errors.InvalidParams(
                f"The Qutip route is limited to cutoff <= {static.Oracle.qutip_cutoff_max}, got {self.cutoff}")


@dataclass(frozen=True)
class OracleRates:
    """Coefficients of the master equation, in rate units"""

    gamma: float
    """Single photon loss rate of each mode"""

    delta: float
    """Detuning of each mode"""

    lam: complex
    """Pair drive kappa E / gamma3"""

    loss: float
    """Pair loss rate kappa^2 / gamma3"""

    @classmethod
    def from_params(cls, nopo: params.NopoParams, flip_pump_sign: bool = False) -> OracleRates:
        """Master equation coefficients of a parameter set.

        Args:
            nopo (params.NopoParams): The physical inputs, with delta3 = 0.
            flip_pump_sign (bool): Negate lambda?
                Defaults to False.

        Returns:
            Rates (OracleRates): The coefficients.
        """

        if nopo.delta3 != 0:
            raise errors.UnsupportedDetuning(
                f"The master equation oracle needs delta3 = 0, got {nopo.delta3!r}")

        lam = nopo.kappa * cmath.rect(nopo.pump_amplitude, nopo.pump_phase) / nopo.gamma3
        return cls(
            gamma=nopo.gamma,
            delta=nopo.delta,
            lam=-lam if flip_pump_sign else lam,
            loss=nopo.kappa ** 2 / nopo.gamma3,
            )


class FockBasis:
    """Flat indexing of density matrix elements in a truncated two-mode Fock space"""

    def __init__(self, cutoff: int, reduced: bool = True):
        """Flat indexing of density matrix elements.

    Args:
        cutoff (int): Largest photon number per mode.
        reduced (bool): Keep only elements with n1 - n2 = m1 - m2?
            Defaults to True.
        """

        self.cutoff = cutoff
        self.reduced = reduced
        c = cutoff
        dim = c + 1

        if reduced:
            self._offsets = np.zeros(2 * c + 1, dtype=np.int64)
            parts = []
            total = 0
            for d in range(-c, c + 1):
                size = dim - abs(d)
                self._offsets[d + c] = total
                i, j = np.divmod(np.arange(size * size, dtype=np.int64), size)
                parts.append((i + max(d, 0), i + max(-d, 0), j + max(d, 0), j + max(-d, 0)))
                total += size * size
            self.n1, self.n2, self.m1, self.m2 = (np.concatenate(column) for column in zip(*parts))
        else:
            bra, ket = np.divmod(np.arange(dim ** 4, dtype=np.int64), dim * dim)
            self.n1, self.n2 = np.divmod(bra, dim)
            self.m1, self.m2 = np.divmod(ket, dim)

        self.size = len(self.n1)
        assert not reduced or self.size == int(self._offsets[-1]) + 1, "Block offsets do not cover the basis"
        self.diagonal = np.flatnonzero((self.n1 == self.m1) & (self.n2 == self.m2))
        """Indices of the populations"""

    def __repr__(self) -> str:
        """String to represent this object"""
        return f"FockBasis(cutoff={self.cutoff}, reduced={self.reduced})"

    def index(self, n1, n2, m1, m2) -> np.ndarray:
        """Flat index of elements, -1 where outside the basis.

        Args:
            n1, n2 (array-like): Bra photon numbers.
            m1, m2 (array-like): Ket photon numbers.

        Returns:
            Index (np.ndarray): Flat indices.
        """

        n1, n2, m1, m2 = (np.asarray(x, dtype=np.int64) for x in (n1, n2, m1, m2))
        c = self.cutoff
        inside = (
            (n1 >= 0) & (n1 <= c) & (n2 >= 0) & (n2 <= c)
            & (m1 >= 0) & (m1 <= c) & (m2 >= 0) & (m2 <= c)
            )

        if self.reduced:
            d = n1 - n2
            inside &= d == m1 - m2
            d = np.clip(d, -c, c)
            size = c + 1 - np.abs(d)
            flat = self._offsets[d + c] + np.minimum(n1, n2) * size + np.minimum(m1, m2)
        else:
            dim = c + 1
            flat = ((n1 * dim + n2) * dim + m1) * dim + m2

        return np.where(inside, flat, -1)

    def vacuum_index(self) -> int:
        """Flat index of |0,0><0,0|"""
        return int(self.index(0, 0, 0, 0))

    def block_states(self, d: int) -> tuple[np.ndarray, np.ndarray]:
        """States with n1 - n2 = d, ordered by min(n1, n2).

        Args:
            d (int): Photon number difference.

        Returns:
            n1 (np.ndarray): Mode 1 photon numbers.
            n2 (np.ndarray): Mode 2 photon numbers.
        """

        i = np.arange(self.cutoff + 1 - abs(d), dtype=np.int64)
        return i + max(d, 0), i + max(-d, 0)


@dataclass(frozen=True)
class Generator:
    """The master equation generator acting on flat density matrix vectors"""

    matrix: sparse.csr_matrix = field(repr=False)
    """Sparse generator"""

    basis: FockBasis
    """Element indexing"""

    rates: OracleRates
    """Coefficients it was assembled from"""

    config: OracleConfig
    """Settings it was built with"""

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """d rho / dt for a flat density matrix vector"""
        return self.matrix @ rho


@dataclass(frozen=True)
class OracleState:
    """Steady state density matrix and its quality figures"""

    cutoff: int
    """Cutoff it was solved at"""

    method: Method
    """Route that produced it"""

    blocks: dict[int, np.ndarray] = field(repr=False)
    """Density matrix blocks by n1 - n2, rows ordered by min(n1, n2)"""

    trace: float
    """Trace, 1 after normalization"""

    hermiticity_defect: float
    """Largest |rho - rho^+| element"""

    min_eigenvalue: float
    """Smallest eigenvalue over the blocks"""

    cutoff_tail_mass: float
    """Total population at n1 = cutoff or n2 = cutoff"""

    residual: float
    """Backward error of the generator equation"""

    basis: FockBasis = field(repr=False)
    """Element indexing"""

    rho: np.ndarray = field(repr=False)
    """Flat density matrix"""

    @property
    def n(self) -> float:
        """Mean photon number of mode 1"""
        return _trace_moment(self.basis, self.rho, 1, 1, 0, 0).real

    @property
    def pair_moment(self) -> complex:
        """<a1 a2>"""
        return _trace_moment(self.basis, self.rho, 0, 1, 0, 1)


def _h_diag(gamma: float, delta: float, loss: float, n1: np.ndarray, n2: np.ndarray) -> np.ndarray:
    """Diagonal of the non-Hermitian effective Hamiltonian"""
    total = n1 + n2
    return -delta * total - 1j * gamma * total - 1j * loss * n1 * n2


def _assemble(basis: FockBasis, rates: OracleRates) -> sparse.csr_matrix:
    """Build the sparse generator in the given basis"""

    n1, n2, m1, m2 = (x.astype(float) for x in (basis.n1, basis.n2, basis.m1, basis.m2))
    i1, i2, j1, j2 = basis.n1, basis.n2, basis.m1, basis.m2
    rows = np.arange(basis.size, dtype=np.int64)
    lam = rates.lam
    gamma = rates.gamma

    entries = [
        # -i (Heff rho - rho Heff^+), diagonal part
        (rows, -1j * _h_diag(gamma, rates.delta, rates.loss, n1, n2)
            + 1j * np.conj(_h_diag(gamma, rates.delta, rates.loss, m1, m2))),
        # Pair creation and annihilation acting from the left
        (basis.index(i1 - 1, i2 - 1, j1, j2), lam * np.sqrt(n1 * n2)),
        (basis.index(i1 + 1, i2 + 1, j1, j2), -np.conj(lam) * np.sqrt((n1 + 1) * (n2 + 1))),
        # and from the right
        (basis.index(i1, i2, j1 - 1, j2 - 1), np.conj(lam) * np.sqrt(m1 * m2)),
        (basis.index(i1, i2, j1 + 1, j2 + 1), -lam * np.sqrt((m1 + 1) * (m2 + 1))),
        # Jumps
        (basis.index(i1 + 1, i2, j1 + 1, j2), 2 * gamma * np.sqrt((n1 + 1) * (m1 + 1))),
        (basis.index(i1, i2 + 1, j1, j2 + 1), 2 * gamma * np.sqrt((n2 + 1) * (m2 + 1))),
        (basis.index(i1 + 1, i2 + 1, j1 + 1, j2 + 1),
            2 * rates.loss * np.sqrt((n1 + 1) * (n2 + 1) * (m1 + 1) * (m2 + 1))),
        ]

    all_rows, all_cols, all_vals = [], [], []
    for cols, vals in entries:
        vals = np.broadcast_to(np.asarray(vals, dtype=complex), cols.shape)
        keep = (cols >= 0) & (vals != 0)
        all_rows.append(rows[keep])
        all_cols.append(cols[keep])
        all_vals.append(vals[keep])

    shape = (basis.size, basis.size)
    matrix = sparse.coo_matrix(
        (np.concatenate(all_vals), (np.concatenate(all_rows), np.concatenate(all_cols))),
        shape=shape,
        ).tocsr()
    logger.debug("Assembled generator: %d unknowns, %d nonzeros", basis.size, matrix.nnz)
    return matrix


def _trace_moment(basis: FockBasis, rho: np.ndarray, k: int, l: int, m: int, n: int) -> complex:
    """Tr(rho a1^+k a1^l a2^+m a2^n) without the accuracy guard"""

    mask = (
        (basis.m1 == basis.n1 - l + k) & (basis.m2 == basis.n2 - n + m)
        & (basis.n1 >= l) & (basis.n2 >= n)
        )
    n1 = basis.n1[mask]
    n2 = basis.n2[mask]
    log_amplitude = (
        0.5 * (gammaln(n1 + 1) + gammaln(n1 - l + k + 1)) - gammaln(n1 - l + 1)
        + 0.5 * (gammaln(n2 + 1) + gammaln(n2 - n + m + 1)) - gammaln(n2 - n + 1)
        )
    return complex(np.sum(rho[mask] * np.exp(log_amplitude)))


def qutip_operators(rates: OracleRates, cutoff: int) -> tuple[qutip.Qobj, list[qutip.Qobj]]:
    """Hamiltonian and collapse operators as qutip objects.

    Args:
        rates (OracleRates): Master equation coefficients.
        cutoff (int): Largest photon number per mode.

    Returns:
        H (qutip.Qobj): -delta (n1 + n2) + i(lambda a1^+ a2^+ - lambda* a1 a2).
        c_ops (list[qutip.Qobj]): sqrt(2 gamma) a1, sqrt(2 gamma) a2 and sqrt(2 Gamma) a1 a2.
    """

    dim = cutoff + 1
    a1 = qutip.tensor(qutip.destroy(dim), qutip.qeye(dim))
    a2 = qutip.tensor(qutip.qeye(dim), qutip.destroy(dim))
    pair = a1 * a2

    H = (
        -rates.delta * (a1.dag() * a1 + a2.dag() * a2)
        + 1j * (rates.lam * pair.dag() - rates.lam.conjugate() * pair)
        )
    c_ops = [
        math.sqrt(2 * rates.gamma) * a1,
        math.sqrt(2 * rates.gamma) * a2,
        math.sqrt(2 * rates.loss) * pair,
        ]
    return H, c_ops


def _qutip_order(basis: FockBasis) -> np.ndarray:
    """Position of each flat basis element in qutip's column stacked vector"""
    dim = basis.cutoff + 1
    return (basis.m1 * dim + basis.m2) * dim ** 2 + basis.n1 * dim + basis.n2


def reference_gate(rates: OracleRates, cutoff: int = static.Oracle.reference_cutoff):
    """Compare the assembled generator entry by entry with qutip's Liouvillian.

    Args:
        rates (OracleRates): Coefficients to assemble with.
        cutoff (int): Cutoff of the unreduced comparison basis.
            Defaults to static.Oracle.reference_cutoff.
    """

    basis = FockBasis(cutoff, reduced=False)
    order = _qutip_order(basis)
    reference = qutip.liouvillian(*qutip_operators(rates, cutoff)).full()[np.ix_(order, order)]
    assembled = _assemble(basis, rates).toarray()

    defect = float(np.max(np.abs(assembled - reference)) / np.max(np.abs(reference)))
    logger.debug("Reference gate: relative defect %.3g", defect)
    if defect > static.Oracle.gate_tol:
        raise errors.OracleMismatch(
            f"Generator differs from the qutip Liouvillian: relative defect {defect:.3g}")


def drift_gate(rates: OracleRates, cutoff: int = static.Oracle.gate_cutoff):
    """Check the assembled generator against the known equations of motion.

    Applies the generator to a random Hermitian matrix supported away from the
    cutoff and compares d<a1>/dt and d<a1 a2>/dt with
    -(gamma - i delta)<a1> + lambda<a2^+> - Gamma<a2^+ a1 a2> and
    -2(gamma - i delta)<a1 a2> + lambda<1 + n1 + n2> - Gamma<(1 + n1 + n2) a1 a2>.

    Args:
        rates (OracleRates): Coefficients to assemble with.
        cutoff (int): Cutoff of the unreduced test basis.
            Defaults to static.Oracle.gate_cutoff.
    """

    basis = FockBasis(cutoff, reduced=False)
    dim = cutoff + 1
    rng = np.random.default_rng(static.Oracle.gate_seed)

    # Random Hermitian matrix on photon numbers up to cutoff - 3
    support = ((np.arange(dim) <= cutoff - 3)[:, None] & (np.arange(dim) <= cutoff - 3)[None, :]).ravel()
    raw = rng.normal(size=(dim * dim, dim * dim)) + 1j * rng.normal(size=(dim * dim, dim * dim))
    raw = raw * support[:, None] * support[None, :]
    rho = ((raw + raw.conj().T) / 2).ravel()

    drho = _assemble(basis, rates) @ rho

    def moment(vector: np.ndarray, *indices: int) -> complex:
        return _trace_moment(basis, vector, *indices)

    gbar = complex(rates.gamma, -rates.delta)
    checks = {
        "a1": (
            moment(drho, 0, 1, 0, 0),
            (-gbar * moment(rho, 0, 1, 0, 0), rates.lam * moment(rho, 0, 0, 1, 0),
                -rates.loss * moment(rho, 0, 1, 1, 1)),
            ),
        "a1a2": (
            moment(drho, 0, 1, 0, 1),
            (-2 * gbar * moment(rho, 0, 1, 0, 1),
                rates.lam * (moment(rho, 0, 0, 0, 0) + moment(rho, 1, 1, 0, 0) + moment(rho, 0, 0, 1, 1)),
                -rates.loss * (moment(rho, 0, 1, 0, 1) + moment(rho, 1, 2, 0, 1) + moment(rho, 0, 1, 1, 2))),
            ),
        }

    for name, (lhs, terms) in checks.items():
        scale = sum(abs(term) for term in terms) or 1.0
        defect = abs(lhs - sum(terms)) / scale
        logger.debug("Drift gate %s: relative defect %.3g", name, defect)
        if defect > static.Oracle.gate_tol:
            raise errors.OracleMismatch(
                f"Generator fails the equation of motion check for <{name}>: relative defect {defect:.3g}")


def build_generator(nopo: params.NopoParams, config: OracleConfig | None = None) -> Generator:
    """Assemble the master equation generator, after passing the drift and reference gates.

    Args:
        nopo (params.NopoParams): Physical inputs, delta3 must be 0.
        config (OracleConfig | None): Solver settings.
            Defaults to None, use OracleConfig().

    Returns:
        Generator (Generator): The sparse generator.
    """

    if config is None:
        config = OracleConfig()

    rates = OracleRates.from_params(nopo, config.flip_pump_sign)
    drift_gate(rates)
    reference_gate(rates)
    basis = FockBasis(config.cutoff, config.reduced)
    return Generator(matrix=_assemble(basis, rates), basis=basis, rates=rates, config=config)


def _backward_error(matrix: sparse.csr_matrix, rho: np.ndarray) -> float:
    norm = abs(matrix).sum(axis=1).max() * np.max(np.abs(rho))
    if norm == 0:
        return 0.0
    return float(np.max(np.abs(matrix @ rho)) / norm)


def _preconditioned_solver(matrix: sparse.csc_matrix, config: OracleConfig):
    """Return a function solving matrix @ x = b, direct or preconditioned LGMRES"""

    if matrix.shape[0] <= static.Oracle.direct_limit:
        lu = splinalg.splu(matrix)
        return lu.solve

    # Bandwidth reduction before the incomplete factorization
    perm = csgraph.reverse_cuthill_mckee(matrix.tocsr())
    rev_perm = np.argsort(perm)
    permuted = matrix[perm, :][:, perm].tocsc()
    ilu = splinalg.spilu(
        permuted,
        drop_tol=static.Oracle.ilu_drop_tol,
        fill_factor=static.Oracle.ilu_fill_factor,
        )
    preconditioner = splinalg.LinearOperator(permuted.shape, matvec=ilu.solve, dtype=complex)

    def solve(b: np.ndarray) -> np.ndarray:
        x, info = splinalg.lgmres(
            permuted, b[perm], M=preconditioner, rtol=config.solver_tol * 1e-2, atol=0.0,
            inner_m=static.Oracle.gmres_restart, maxiter=static.Oracle.gmres_maxiter,
            )
        if info != 0:
            raise errors.SolverFailure(f"LGMRES stopped with info {info}")
        return x[rev_perm]

    return solve


def _null_space(generator: Generator) -> np.ndarray:
    """Solve generator @ rho = 0 with the weighted trace added to the vacuum row"""

    basis = generator.basis
    matrix = generator.matrix
    row = basis.vacuum_index()
    weight = float(np.mean(np.abs(matrix.data)))

    trace_row = sparse.csr_matrix(
        (np.full(len(basis.diagonal), weight, dtype=complex),
            (np.full(len(basis.diagonal), row), basis.diagonal)),
        shape=matrix.shape,
        )
    system = (matrix + trace_row).tocsc()
    b = np.zeros(basis.size, dtype=complex)
    b[row] = weight

    logger.debug("Null space solve with %d unknowns", basis.size)
    return _preconditioned_solver(system, generator.config)(b)


def _time_stepping(generator: Generator) -> np.ndarray:
    """Implicit Euler from the vacuum until the residual is small"""

    basis = generator.basis
    matrix = generator.matrix
    step = static.Oracle.time_step / generator.rates.gamma
    system = (sparse.identity(basis.size, dtype=complex, format="csc") - step * matrix).tocsc()
    solve = _preconditioned_solver(system, generator.config)

    rho = np.zeros(basis.size, dtype=complex)
    rho[basis.vacuum_index()] = 1.0
    for count in range(1, static.Oracle.max_steps + 1):
        rho = solve(rho)
        rho /= np.sum(rho[basis.diagonal])
        residual = _backward_error(matrix, rho)
        if residual <= generator.config.solver_tol:
            logger.debug("Time stepping converged after %d steps, residual %.3g", count, residual)
            return rho

    raise errors.SolverFailure(
        f"Time stepping did not reach {generator.config.solver_tol:g} in {static.Oracle.max_steps} steps")


def _qutip_steady_state(generator: Generator) -> np.ndarray:
    """qutip's steady state, gathered into the flat basis"""

    basis = generator.basis
    dim = basis.cutoff + 1
    logger.debug("Qutip steady state at cutoff %d", basis.cutoff)
    rho_full = qutip.steadystate(*qutip_operators(generator.rates, basis.cutoff)).full()
    return rho_full[basis.n1 * dim + basis.n2, basis.m1 * dim + basis.m2]


def _blocks(basis: FockBasis, rho: np.ndarray) -> dict[int, np.ndarray]:
    blocks = {}
    c = basis.cutoff
    for d in range(-c, c + 1):
        n1, n2 = basis.block_states(d)
        flat = basis.index(n1[:, None], n2[:, None], n1[None, :], n2[None, :])
        blocks[d] = rho[flat]
    return blocks


def _matrix_checks(basis: FockBasis, rho: np.ndarray, blocks: dict[int, np.ndarray]) -> tuple[float, float]:
    """Hermiticity defect and smallest eigenvalue"""

    if basis.reduced:
        matrices = blocks.values()
    else:
        dim = (basis.cutoff + 1) ** 2
        matrices = [rho.reshape(dim, dim)]

    defect = max(float(np.max(np.abs(m - m.conj().T))) for m in matrices)
    lowest = min(float(np.linalg.eigvalsh((m + m.conj().T) / 2)[0]) for m in matrices)
    return defect, lowest


def steady_state(generator: Generator) -> OracleState:
    """Solve for the steady state.

    Args:
        generator (Generator): The assembled generator.

    Returns:
        State (OracleState): The normalized steady state.
    """

    config = generator.config
    basis = generator.basis

    try:
        if config.method is Method.NULL_SPACE:
            rho = _null_space(generator)
        elif config.method is Method.TIME_STEPPING:
            rho = _time_stepping(generator)
        else:
            rho = _qutip_steady_state(generator)
    except RuntimeError as e:
        # Singular factorizations land here
        raise errors.SolverFailure(f"Steady state solve failed: {e}") from e

    trace = complex(np.sum(rho[basis.diagonal]))
    if trace == 0 or not np.all(np.isfinite(rho)):
        raise errors.SolverFailure("Steady state solve returned an unnormalizable vector")
    rho = rho / trace

    residual = _backward_error(generator.matrix, rho)
    if residual > config.solver_tol:
        raise errors.SolverFailure(f"Steady state residual {residual:.3g} exceeds {config.solver_tol:g}")

    blocks = _blocks(basis, rho)
    defect, lowest = _matrix_checks(basis, rho, blocks)
    if defect > static.Oracle.defect_max or lowest < static.Oracle.eigenvalue_min:
        logger.warning(
            "Steady state at cutoff %d has hermiticity defect %.3g and smallest eigenvalue %.3g",
            basis.cutoff, defect, lowest,
            )

    diagonal = basis.diagonal
    edge = (basis.n1[diagonal] == basis.cutoff) | (basis.n2[diagonal] == basis.cutoff)
    tail = float(np.sum(rho[diagonal][edge].real))

    return OracleState(
        cutoff=basis.cutoff,
        method=config.method,
        blocks=blocks,
        trace=float(np.sum(rho[diagonal]).real),
        hermiticity_defect=defect,
        min_eigenvalue=lowest,
        cutoff_tail_mass=tail,
        residual=residual,
        basis=basis,
        rho=rho,
        )


def converged_steady_state(nopo: params.NopoParams, config: OracleConfig | None = None) -> OracleState:
    """Solve at rising cutoffs until the boundary population is negligible.

    Args:
        nopo (params.NopoParams): Physical inputs, delta3 must be 0.
        config (OracleConfig | None): Starting settings.
            Defaults to None, use OracleConfig().

    Returns:
        State (OracleState): The first state with tail mass at most static.Oracle.tail_mass.
    """

    if config is None:
        config = OracleConfig()

    cutoff = config.cutoff
    previous = None
    while True:
        state = steady_state(build_generator(nopo, replace(config, cutoff=cutoff)))
        tail = state.cutoff_tail_mass
        if tail <= static.Oracle.tail_mass:
            logger.info("Oracle converged at cutoff %d, tail mass %.3g", cutoff, tail)
            return state

        if cutoff >= config.max_cutoff_scan:
            raise errors.CutoffInsufficient(
                f"Tail mass {tail:.3g} at the cutoff ceiling {config.max_cutoff_scan}")

        step = _scan_step(previous, cutoff, tail)
        logger.debug("Tail mass %.3g at cutoff %d, raising the cutoff by %d", tail, cutoff, step)
        previous = (cutoff, tail)
        cutoff = min(cutoff + step, config.max_cutoff_scan)

        if not config.reduced and cutoff > static.Oracle.full_cutoff_max:
            raise errors.CutoffInsufficient(
                f"Tail mass {tail:.3g} and unreduced storage stops at cutoff {static.Oracle.full_cutoff_max}")
        if config.method is Method.QUTIP and cutoff > static.Oracle.qutip_cutoff_max:
            raise errors.CutoffInsufficient(
                f"Tail mass {tail:.3g} and the Qutip route stops at cutoff {static.Oracle.qutip_cutoff_max}")


def _scan_step(previous: tuple[int, float] | None, cutoff: int, tail: float) -> int:
    """Cutoff increment, from the geometric decay of the tail mass between two solves.

    Args:
        previous (tuple[int, float] | None): Cutoff and tail mass of the last solve, if any.
        cutoff (int): Current cutoff.
        tail (float): Current tail mass, above static.Oracle.tail_mass.

    Returns:
        Step (int): A positive multiple of static.Oracle.scan_step.
    """

    step = static.Oracle.scan_step
    if previous is None:
        return step

    last_cutoff, last_tail = previous
    if not 0 < tail < last_tail:
        return step

    # Assumes the tail mass falls off at least geometrically with the cutoff
    decay = math.log(last_tail / tail) / (cutoff - last_cutoff)
    needed = math.log(tail / static.Oracle.tail_mass) / decay
    return max(step, math.ceil(needed / step) * step)


def oracle_moment(state: OracleState, k: int, l: int, m: int, n: int) -> complex:
    """Normally ordered moment of the steady state.

    Args:
        state (OracleState): The steady state.
        k (int): Power of a1^+.
        l (int): Power of a1.
        m (int): Power of a2^+.
        n (int): Power of a2.

    Returns:
        Moment (complex): Tr(rho a1^+k a1^l a2^+m a2^n).
    """

    indices = (k, l, m, n)
    if any(not isinstance(i, int) or i < 0 for i in indices):
        raise errors.InvalidParams(f"Moment indices must be non-negative integers, got {indices!r}")

    if sum(indices) > static.Oracle.max_order or max(indices) >= state.cutoff / 2:
        raise errors.AccuracyGuard(
            f"Moment {indices!r} is too high for cutoff {state.cutoff}: need a total of at most "
            f"{static.Oracle.max_order} and every index below {state.cutoff / 2:g}")

    return _trace_moment(state.basis, state.rho, k, l, m, n)


def oracle_epr_variance(state: OracleState, theta1: float | None = None, theta2: float = 0.0) -> float:
    """Variance of X1(theta1) - X2(theta2) computed from the density matrix.

    No symmetry is assumed: first moments and single mode coherences are
    included.

    Args:
        state (OracleState): The steady state.
        theta1 (float | None): Quadrature phase of mode 1.
            Defaults to None, use arg<a1 a2> - theta2, the minimizing choice.
        theta2 (float): Quadrature phase of mode 2.
            Defaults to 0.0.

    Returns:
        Variance (float): Vacuum level 1.
    """

    def moment(*indices: int) -> complex:
        return _trace_moment(state.basis, state.rho, *indices)

    pair = moment(0, 1, 0, 1)
    if theta1 is None:
        theta1 = cmath.phase(pair) - theta2

    u1 = cmath.exp(-1j * theta1)
    u2 = cmath.exp(-1j * theta2)

    # B = a1 u1 - a2 u2, X1 - X2 = (B + B^+) / sqrt 2
    mean_b = moment(0, 1, 0, 0) * u1 - moment(0, 0, 0, 1) * u2
    b_squared = moment(0, 2, 0, 0) * u1 ** 2 + moment(0, 0, 0, 2) * u2 ** 2 - 2 * pair * u1 * u2
    b_dagger_b = (
        moment(1, 1, 0, 0).real + moment(0, 0, 1, 1).real
        - 2 * (moment(1, 0, 0, 1) * (u1 * u2.conjugate()).conjugate()).real
        )
    return b_squared.real + b_dagger_b + 1 - 2 * mean_b.real ** 2


def oracle_v_min(state: OracleState) -> float:
    """Minimized EPR variance of the steady state.

    Args:
        state (OracleState): The steady state.

    Returns:
        V_min (float): oracle_epr_variance at the minimizing phases.
    """

    return oracle_epr_variance(state)

