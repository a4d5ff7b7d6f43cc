"""Ground states, fidelity metrics, photon correlations, and analytic limits."""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from .errors import (ConfigError, DegenerateGroundStateError,
                     SectorMismatchError, ZeroPhotonDensityError)
from .fockspace import LatticeConfig, SectorBasis, SparseOperator, \
    enumerate_sector, ladder_op
from .model import jc_analytic

_NORM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class StateVector:
    """Unit-norm state in a sector basis (normalized on construction)."""

    basis: SectorBasis
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (self.basis.dim,):
            raise ConfigError(
                f"amplitude vector has shape {amps.shape}, basis dim {self.basis.dim}")
        norm = np.linalg.norm(amps)
        if norm < _NORM_TOL:
            raise ConfigError("cannot normalize a (near-)zero state vector")
        if abs(norm - 1.0) > _NORM_TOL:
            amps = amps / norm
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.basis.dim

    def overlap(self, other: "StateVector") -> complex:
        _check_same_basis(self, other)
        return np.vdot(self.amplitudes, other.amplitudes)


def _check_same_basis(a: StateVector, b: StateVector):
    if a.basis is b.basis:
        return
    if not a.basis.same_sector(b.basis):
        raise SectorMismatchError("states live on different sector bases")


def fix_phase(amplitudes: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude amplitude real positive (deterministic phase)."""
    k = int(np.argmax(np.abs(amplitudes)))
    phase = amplitudes[k] / abs(amplitudes[k])
    return amplitudes / phase


def ground_state(h: SparseOperator,
                 degeneracy_tol: float = 1e-10) -> tuple[float, StateVector]:
    """Minimal eigenpair of a Hermitian sector operator.

    Dense full diagonalization; at these dimensions (<= a few hundred) it is
    both fast and deterministic.  Raises if the gap to the second level is
    below ``degeneracy_tol`` so callers never rely on an arbitrary choice
    inside a degenerate subspace.
    """
    if not h.rows.same_sector(h.cols):
        raise SectorMismatchError("ground_state requires a square sector operator")
    dense = h.to_dense()
    if not np.allclose(dense, dense.conj().T, atol=1e-12, rtol=0.0):
        raise ConfigError("ground_state requires a Hermitian operator")
    energies, vectors = np.linalg.eigh(dense)
    if h.rows.dim > 1 and energies[1] - energies[0] < degeneracy_tol:
        raise DegenerateGroundStateError(
            f"ground level degenerate within {degeneracy_tol} "
            f"(gap {energies[1] - energies[0]:.3e})")
    psi = fix_phase(vectors[:, 0].astype(np.complex128))
    return float(energies[0]), StateVector(h.rows, psi)


def fidelity(a: StateVector, b: StateVector) -> float:
    """Squared overlap |<a|b>|^2; symmetric and global-phase invariant."""
    _check_same_basis(a, b)
    return float(min(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2, 1.0))


def bures_angle(a: StateVector, b: StateVector) -> float:
    """arccos of the overlap magnitude, in [0, pi/2]."""
    _check_same_basis(a, b)
    ov = abs(np.vdot(a.amplitudes, b.amplitudes))
    return float(np.arccos(min(ov, 1.0)))


def photon_correlator(psi: StateVector, i: int, j: int) -> complex:
    """Unnormalized cross-site photon coherence <a_i^dag a_j>."""
    basis = psi.basis
    if basis.sector == 0:
        return 0.0 + 0.0j
    lower = enumerate_sector(basis.config, basis.sector - 1)
    a_i = ladder_op(basis, lower, i, "annihilate_photon")
    a_j = a_i if i == j else ladder_op(basis, lower, j, "annihilate_photon")
    return complex(np.vdot(a_i.apply(psi.amplitudes), a_j.apply(psi.amplitudes)))


def spdm(psi: StateVector, i: int, j: int) -> complex:
    """Single-particle density matrix element <a_i^dag a_j> / <a_i^dag a_i>."""
    density = photon_correlator(psi, i, i).real
    if density < 1e-12:
        raise ZeroPhotonDensityError(
            f"site {i} carries no photons (density {density:.3e})")
    return photon_correlator(psi, i, j) / density


def analytic_sf_state(config: LatticeConfig) -> StateVector:
    """Hopping-dominated limit: all excitations condensed in the k=0 photon mode.

    Exact ground state at g = 0 for any J > 0: the Fock state
    ``(a_{k=0}^dag)^N |vac> / sqrt(N!)`` with every qubit down.
    """
    _require_unit_filling(config)
    n = config.n_sites
    m = config.n_excitations
    basis = enumerate_sector(config, m)
    amps = np.zeros(basis.dim, dtype=np.complex128)
    prefactor = np.sqrt(factorial(m)) / n ** (m / 2)
    for pos, state in enumerate(basis.states):
        if any(state[n:]):
            continue
        denom = 1.0
        for n_j in state[:n]:
            denom *= factorial(n_j)
        amps[pos] = prefactor / np.sqrt(denom)
    return StateVector(basis, amps)


def analytic_mi_state(config: LatticeConfig, g: float,
                      delta: float = 0.0) -> StateVector:
    """Coupling-dominated limit: one lower-polariton excitation per site.

    Exact ground state at J = 0 for g > 0: the product over sites of
    ``|1,-> = sin(theta/2)|1,down> - cos(theta/2)|0,up>``.
    """
    _require_unit_filling(config)
    n = config.n_sites
    basis = enumerate_sector(config, config.n_excitations)
    _, _, theta = jc_analytic(1, g, delta)
    amp_photon = np.sin(theta / 2.0)
    amp_qubit = -np.cos(theta / 2.0)
    amps = np.zeros(basis.dim, dtype=np.complex128)
    for pos, state in enumerate(basis.states):
        coeff = 1.0
        for n_j, s_j in zip(state[:n], state[n:]):
            if (n_j, s_j) == (1, 0):
                coeff *= amp_photon
            elif (n_j, s_j) == (0, 1):
                coeff *= amp_qubit
            else:
                coeff = 0.0
                break
        amps[pos] = coeff
    return StateVector(basis, amps)


def _require_unit_filling(config: LatticeConfig):
    if config.n_excitations != config.n_sites:
        raise ConfigError(
            "analytic limiting states are defined at unit filling "
            f"(N = {config.n_sites}, M = {config.n_excitations})")
