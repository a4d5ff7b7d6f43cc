"""Open-system propagation with cavity and qubit decay during the pulse.

Decay only lowers the total excitation number, so the density matrix lives
on the direct sum of the sectors m = 0..M (321 dimensions for the four-site,
four-excitation lattice) instead of the full tensor space.  The equation of
motion is integrated with dense RK4; the right-hand side is applied as
sparse-times-dense products and the superoperator is never materialized.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ._kernels import lindblad_rk4
from .controls import ControlSchedule
from .errors import ConfigError, IntegrationAccuracyError, SectorMismatchError
from .fockspace import LatticeConfig, SectorBasis, enumerate_sector, ladder_op
from .model import operator_templates
from .propagate import resolve_steps
from .spectrum import StateVector

TRACE_TOL = 1e-6


@dataclass(frozen=True)
class DecoherenceRates:
    """Uniform decay rates, dimensionless (reference coupling g = 1).

    ``gamma_d`` (pure dephasing) is accepted but defaults to 0; the decay
    channels are the ones with published reference numbers.
    """

    kappa: float
    gamma: float
    gamma_d: float = 0.0

    def __post_init__(self):
        if self.kappa < 0 or self.gamma < 0 or self.gamma_d < 0:
            raise ConfigError("decoherence rates must be >= 0")


@dataclass(frozen=True, eq=False)
class DirectSumBasis:
    """Concatenation of the sector bases m = 0..M with offset bookkeeping."""

    config: LatticeConfig
    sectors: tuple[SectorBasis, ...]
    offsets: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.offsets[-1] + self.sectors[-1].dim

    def sector_slice(self, m: int) -> slice:
        return slice(self.offsets[m], self.offsets[m] + self.sectors[m].dim)

    def embed(self, psi: StateVector) -> np.ndarray:
        """Lift a sector state into the direct-sum space."""
        m = psi.basis.sector
        if m >= len(self.sectors) or not psi.basis.same_sector(self.sectors[m]):
            raise SectorMismatchError(
                "state sector is not part of this direct sum")
        out = np.zeros(self.dim, dtype=np.complex128)
        out[self.sector_slice(m)] = psi.amplitudes
        return out


def build_sector_sum_basis(config: LatticeConfig) -> DirectSumBasis:
    """Direct sum over all sectors reachable by decay from m = M."""
    sectors = tuple(enumerate_sector(config, m)
                    for m in range(config.n_excitations + 1))
    offsets = []
    total = 0
    for basis in sectors:
        offsets.append(total)
        total += basis.dim
    return DirectSumBasis(config=config, sectors=sectors, offsets=tuple(offsets))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace density matrix on a direct-sum basis."""

    basis: DirectSumBasis
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape != (self.basis.dim, self.basis.dim):
            raise ConfigError(f"density matrix shape {m.shape} does not match "
                              f"basis dimension {self.basis.dim}")
        if abs(np.trace(m).real - 1.0) > 1e-8 or abs(np.trace(m).imag) > 1e-8:
            raise ConfigError(f"trace {np.trace(m):.10f} is not 1")
        if np.max(np.abs(m - m.conj().T)) > 1e-10:
            raise ConfigError("density matrix is not Hermitian")
        if np.linalg.eigvalsh(m)[0] < -1e-8:
            raise ConfigError("density matrix has a significantly negative eigenvalue")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_state(cls, basis: DirectSumBasis, psi: StateVector) -> "DensityMatrix":
        vec = basis.embed(psi)
        return cls(basis=basis, matrix=np.outer(vec, vec.conj()))


@dataclass(frozen=True, eq=False)
class _SumSpaceOperators:
    """Sparse operators on the direct-sum space needed by the master equation."""

    coupling: sp.csr_matrix        # sum_j (a_j^dag s_j^- + h.c.), block diagonal
    hopping_neg: sp.csr_matrix     # -(hopping sum), block diagonal
    diag: np.ndarray               # omega_c n + omega_z q, real diagonal
    photon_lower: tuple[sp.csr_matrix, ...]   # a_j on the direct sum
    qubit_lower: tuple[sp.csr_matrix, ...]    # sigma_j^- on the direct sum
    photon_count: np.ndarray       # total photon number diagonal
    qubit_count: np.ndarray        # total qubit excitation diagonal
    qubit_z_cols: np.ndarray       # (dim, n_sites) matrix of sigma_jz diagonals


def _block_diag_template(basis: DirectSumBasis, pick) -> sp.csr_matrix:
    return sp.block_diag([pick(operator_templates(s)).matrix
                          for s in basis.sectors], format="csr")


def _lowering_total(basis: DirectSumBasis, site: int, kind: str) -> sp.csr_matrix:
    dim = basis.dim
    blocks = sp.lil_matrix((dim, dim), dtype=np.complex128)
    for m in range(1, len(basis.sectors)):
        op = ladder_op(basis.sectors[m], basis.sectors[m - 1], site, kind)
        blocks[basis.sector_slice(m - 1), basis.sector_slice(m)] = op.matrix
    return blocks.tocsr()


def _sum_space_operators(basis: DirectSumBasis) -> _SumSpaceOperators:
    cfg = basis.config
    n = cfg.n_sites
    coupling = _block_diag_template(basis, lambda t: t.coupling)
    hopping_neg = (-1.0) * _block_diag_template(basis, lambda t: t.hopping)
    nphot = _block_diag_template(basis, lambda t: t.photon_number).diagonal().real
    nqub = _block_diag_template(basis, lambda t: t.qubit_excitation).diagonal().real
    diag = cfg.omega_c * nphot + cfg.omega_z * nqub
    z_cols = np.empty((basis.dim, n))
    for m, sec in enumerate(basis.sectors):
        sl = basis.sector_slice(m)
        states = np.array(sec.states)
        for j in range(n):
            z_cols[sl, j] = 2.0 * states[:, n + j] - 1.0
    return _SumSpaceOperators(
        coupling=coupling, hopping_neg=hopping_neg, diag=diag,
        photon_lower=tuple(_lowering_total(basis, j + 1, "annihilate_photon")
                           for j in range(n)),
        qubit_lower=tuple(_lowering_total(basis, j + 1, "lower_qubit")
                          for j in range(n)),
        photon_count=nphot, qubit_count=nqub, qubit_z_cols=z_cols)


@dataclass(frozen=True, eq=False)
class LindbladResult:
    rho_final: DensityMatrix
    fidelity: float | None
    trace_drift_max: float
    excitation_vs_t: np.ndarray
    times: np.ndarray


def _pack_jump_ops(ops: _SumSpaceOperators, rates: DecoherenceRates,
                   n_sites: int, dim: int):
    """Concatenate sqrt(rate)-scaled jump operators into flat CSR arrays.

    Pre-scaling by sqrt(rate) makes every channel uniform: the dissipator is
    sum_k L_k rho L_k^dag minus the anticommutator of the real diagonal
    sum_k L_k^dag L_k (all three channel types have diagonal L^dag L).
    """
    jumps = []
    decay_diag = np.zeros(dim)
    if rates.kappa > 0:
        for a in ops.photon_lower:
            jumps.append(np.sqrt(rates.kappa) * a)
        decay_diag += rates.kappa * ops.photon_count
    if rates.gamma > 0:
        for s in ops.qubit_lower:
            jumps.append(np.sqrt(rates.gamma) * s)
        decay_diag += rates.gamma * ops.qubit_count
    if rates.gamma_d > 0:
        for j in range(n_sites):
            z = sp.diags(ops.qubit_z_cols[:, j].astype(np.complex128),
                         format="csr")
            jumps.append(np.sqrt(0.5 * rates.gamma_d) * z)
        decay_diag += 0.5 * rates.gamma_d * n_sites
    if not jumps:
        return (np.zeros(0, dtype=np.complex128), np.zeros(0, dtype=np.int64),
                np.zeros((0, dim + 1), dtype=np.int64), decay_diag)
    data = np.concatenate([op.data.astype(np.complex128) for op in jumps])
    indices = np.concatenate([op.indices.astype(np.int64) for op in jumps])
    indptr = np.empty((len(jumps), dim + 1), dtype=np.int64)
    offset = 0
    for k, op in enumerate(jumps):
        indptr[k] = op.indptr.astype(np.int64) + offset
        offset += op.nnz
    return data, indices, indptr, decay_diag


def evolve_lindblad(rho0: DensityMatrix, schedule: ControlSchedule,
                    rates: DecoherenceRates, total_time: float | None = None,
                    dt: float | None = None, *,
                    target: StateVector | None = None,
                    sample_every: int = 10,
                    trace_tol: float = TRACE_TOL) -> LindbladResult:
    """Integrate the master equation with decay channels on every site.

    The drift is ``-i[H(t), rho]`` plus, for each site, the cavity-decay and
    qubit-decay dissipators at rates ``kappa`` and ``gamma`` (and optionally
    pure dephasing at ``gamma_d``).  Returns the final density matrix and,
    when ``target`` is given, the fidelity ``<target|rho(T)|target>``.
    """
    basis = rho0.basis
    if total_time is None:
        total_time = schedule.total_time
    elif abs(total_time - schedule.total_time) > 1e-12 * max(1.0, total_time):
        raise ConfigError(
            f"schedule covers [0, {schedule.total_time}], requested T={total_time}")
    n_steps, dt = resolve_steps(total_time, dt)
    if sample_every < 1:
        raise ConfigError("sample_every must be >= 1")
    ops = _sum_space_operators(basis)
    g_stages, j_stages = schedule.stage_values(n_steps)
    j_data, j_indices, j_indptr, decay_diag = _pack_jump_ops(
        ops, rates, basis.config.n_sites, basis.dim)

    sample_steps = np.arange(0, n_steps + 1, sample_every, dtype=np.int64)
    if sample_steps[-1] != n_steps:
        sample_steps = np.append(sample_steps, n_steps)
    coupling = ops.coupling
    hopping = ops.hopping_neg
    rho, traces, excitation = lindblad_rk4(
        coupling.data.astype(np.complex128), coupling.indices.astype(np.int64),
        coupling.indptr.astype(np.int64),
        hopping.data.astype(np.complex128), hopping.indices.astype(np.int64),
        hopping.indptr.astype(np.int64),
        np.ascontiguousarray(ops.diag), j_data, j_indices, j_indptr,
        decay_diag, np.ascontiguousarray(ops.photon_count + ops.qubit_count),
        rho0.matrix, g_stages, j_stages, dt, n_steps, sample_steps)

    trace_drift = float(np.max(np.abs(traces - 1.0)))
    if trace_drift > trace_tol:
        raise IntegrationAccuracyError(
            f"trace drift {trace_drift:.3e} exceeds {trace_tol:.1e}; reduce dt")

    fidelity = None
    if target is not None:
        vec = basis.embed(target)
        fidelity = float(np.real(np.vdot(vec, rho @ vec)))
    return LindbladResult(rho_final=DensityMatrix(basis=basis, matrix=rho),
                          fidelity=fidelity, trace_drift_max=trace_drift,
                          excitation_vs_t=np.asarray(excitation),
                          times=sample_steps * dt)
