"""Jaynes-Cummings lattice Hamiltonian assembly and the single-site spectrum.

The sector Hamiltonian is a linear combination of four coefficient-free
templates (qubit-cavity coupling, photon hopping, photon number, qubit
excitation number), so time-dependent rebuilds cost one sparse ``axpy``
instead of a full reconstruction.
"""
from __future__ import annotations

import weakref
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .fockspace import SectorBasis, SparseOperator


@dataclass(frozen=True)
class Couplings:
    """Instantaneous lattice couplings, dimensionless (reference g = 1)."""

    g: float
    j_hop: float
    delta: float = 0.0

    def __post_init__(self):
        for name in ("g", "j_hop", "delta"):
            if not np.isfinite(getattr(self, name)):
                raise ConfigError(f"coupling {name} must be finite")


@dataclass(frozen=True, eq=False)
class OperatorTemplates:
    """Coefficient-independent pieces of the lattice Hamiltonian.

    ``coupling``  : sum_j (a_j^dag sigma_j^- + sigma_j^+ a_j)
    ``hopping``   : sum_j (a_j^dag a_{j+1} + a_{j+1}^dag a_j), periodic
    ``photon_number`` / ``qubit_excitation``: diagonal counters
    """

    coupling: SparseOperator
    hopping: SparseOperator
    photon_number: SparseOperator
    qubit_excitation: SparseOperator


_template_cache: "weakref.WeakKeyDictionary[SectorBasis, OperatorTemplates]" = \
    weakref.WeakKeyDictionary()


def operator_templates(basis: SectorBasis) -> OperatorTemplates:
    """Build (or fetch cached) Hamiltonian templates for a sector basis."""
    cached = _template_cache.get(basis)
    if cached is not None:
        return cached
    n = basis.n_sites
    cutoff = basis.config.fock_cutoff
    coupling_entries = []
    hopping_entries = []
    number_entries = []
    qubit_entries = []
    for col, state in enumerate(basis.states):
        ns = state[:n]
        ss = state[n:]
        number_entries.append((col, col, float(sum(ns))))
        qubit_entries.append((col, col, float(sum(ss))))
        for j in range(n):
            # a_j^dag sigma_j^-  (qubit down, photon up) plus h.c.
            if ss[j] == 1 and ns[j] + 1 <= cutoff:
                new = list(state)
                new[j] += 1
                new[n + j] = 0
                row = basis.index[tuple(new)]
                amp = np.sqrt(ns[j] + 1)
                coupling_entries.append((row, col, amp))
                coupling_entries.append((col, row, amp))
            # a_j^dag a_{j+1} plus h.c., with a_{N+1} = a_1
            jp = (j + 1) % n
            if ns[jp] >= 1 and ns[j] + 1 <= cutoff:
                new = list(state)
                new[jp] -= 1
                new[j] += 1
                row = basis.index[tuple(new)]
                amp = np.sqrt(ns[jp]) * np.sqrt(ns[j] + 1)
                hopping_entries.append((row, col, amp))
                hopping_entries.append((col, row, amp))
    templates = OperatorTemplates(
        coupling=SparseOperator.from_entries(basis, basis, coupling_entries),
        hopping=SparseOperator.from_entries(basis, basis, hopping_entries),
        photon_number=SparseOperator.from_entries(basis, basis, number_entries),
        qubit_excitation=SparseOperator.from_entries(basis, basis, qubit_entries),
    )
    _template_cache[basis] = templates
    return templates


def build_h0(basis: SectorBasis, couplings: Couplings) -> SparseOperator:
    """On-site part: sum_j [w_c n_j + w_z (sigma_jz+1)/2 + g (a_j^dag sigma_j^- + h.c.)].

    The cavity frequency comes from the lattice config; the qubit splitting
    is derived as ``omega_z = omega_c - delta`` so that the detuning in
    ``couplings`` is authoritative.
    """
    t = operator_templates(basis)
    omega_c = basis.config.omega_c
    omega_z = omega_c - couplings.delta
    return (omega_c * t.photon_number + omega_z * t.qubit_excitation
            + couplings.g * t.coupling)


def build_hint(basis: SectorBasis, j_hop: float) -> SparseOperator:
    """Photon hopping: -J sum_j (a_j^dag a_{j+1} + a_{j+1}^dag a_j), periodic."""
    return (-j_hop) * operator_templates(basis).hopping


def build_ht(basis: SectorBasis, couplings: Couplings) -> SparseOperator:
    """Full lattice Hamiltonian: on-site plus hopping."""
    return build_h0(basis, couplings) + build_hint(basis, couplings.j_hop)


def jc_analytic(n: int, g: float, delta: float,
                omega_c: float = 0.0) -> tuple[float, float, float]:
    """Energies and mixing angle of the n-excitation doublet of a single cell.

    Returns ``(E_plus, E_minus, theta)`` with
    ``E_{n,+-} = n w_c - delta/2 +- chi(n)/2``, ``chi(n) = sqrt(delta^2 + 4 n g^2)``
    and ``theta = 2 arcsin sqrt((1 - delta/chi)/2)``.  The zero-excitation
    ground state (energy 0) is not a doublet and is rejected.
    """
    if n < 1:
        raise ConfigError("doublet index n must be >= 1 (n=0 is the ground state)")
    chi = np.sqrt(delta ** 2 + 4.0 * n * g ** 2)
    if chi == 0.0:
        raise ConfigError("degenerate doublet: g = 0 and delta = 0")
    e_plus = n * omega_c - 0.5 * delta + 0.5 * chi
    e_minus = n * omega_c - 0.5 * delta - 0.5 * chi
    theta = 2.0 * np.arcsin(np.sqrt(0.5 * (1.0 - delta / chi)))
    return e_plus, e_minus, theta
