"""Fixed-excitation basis sectors of a Jaynes-Cummings lattice and sparse site operators.

The lattice Hamiltonian conserves the total excitation number
``sum_j a_j^dag a_j + (sigma_jz + 1)/2``, so all work happens inside one
excitation sector at a time.  A sector basis enumerates occupation tuples
``(n_1..n_N, s_1..s_N)`` (photon numbers and qubit bits) in lexicographic
order, and operators are stored sector-to-sector as sparse matrices.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import ConfigError, SectorMismatchError

# excitation change of each operator kind
_KIND_DELTA = {
    "annihilate_photon": -1,
    "create_photon": +1,
    "lower_qubit": -1,
    "raise_qubit": +1,
    "qubit_z": 0,
    "photon_number": 0,
}


@dataclass(frozen=True)
class LatticeConfig:
    """Geometry and bare frequencies of the lattice.

    Frequencies are in dimensionless units (reference coupling g = 1).
    ``fock_cutoff`` defaults to the excitation number, which keeps the
    sector representation exact at filling <= 1 (no term in the closed or
    decay-only dynamics ever raises the photon number past it).
    """

    n_sites: int
    n_excitations: int
    fock_cutoff: int | None = None
    omega_c: float = 0.0
    omega_z: float = 0.0
    periodic: bool = True

    def __post_init__(self):
        if self.n_sites < 1:
            raise ConfigError(f"n_sites must be >= 1, got {self.n_sites}")
        if self.n_excitations < 0:
            raise ConfigError(
                f"n_excitations must be >= 0, got {self.n_excitations}")
        if self.fock_cutoff is None:
            object.__setattr__(self, "fock_cutoff",
                               max(self.n_excitations, 1))
        if self.fock_cutoff < 1:
            raise ConfigError(f"fock_cutoff must be >= 1, got {self.fock_cutoff}")
        if self.fock_cutoff < self.n_excitations:
            raise ConfigError(
                "fock_cutoff < n_excitations would truncate the sector "
                f"(cutoff {self.fock_cutoff}, excitations {self.n_excitations})")
        if not self.periodic:
            raise ConfigError("only periodic boundary conditions are supported")

    @property
    def detuning(self) -> float:
        return self.omega_c - self.omega_z


@dataclass(frozen=True, eq=False)
class SectorBasis:
    """Ordered occupation basis of one excitation sector.

    ``states[i]`` is the tuple ``(n_1..n_N, s_1..s_N)`` at position ``i``;
    ``index`` inverts that map.  Ordering is lexicographic, which makes
    eigenvector phases and golden files reproducible.
    """

    config: LatticeConfig
    sector: int
    states: tuple[tuple[int, ...], ...]
    index: dict = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.states)

    @property
    def n_sites(self) -> int:
        return self.config.n_sites

    def same_sector(self, other: "SectorBasis") -> bool:
        return self.config == other.config and self.sector == other.sector


def _photon_tuples(n_sites: int, total: int, cutoff: int):
    """All photon tuples with given site count, sum and per-site cap."""
    if n_sites == 1:
        if 0 <= total <= cutoff:
            yield (total,)
        return
    for first in range(min(total, cutoff) + 1):
        for rest in _photon_tuples(n_sites - 1, total - first, cutoff):
            yield (first,) + rest


def _qubit_tuples(n_sites: int, total: int):
    """All 0/1 tuples with given sum."""
    if total < 0 or total > n_sites:
        return
    if n_sites == 1:
        yield (total,)
        return
    for first in (0, 1):
        for rest in _qubit_tuples(n_sites - 1, total - first):
            yield (first,) + rest


def enumerate_sector(config: LatticeConfig, m: int) -> SectorBasis:
    """Build the basis of all occupation tuples with total excitation ``m``."""
    if m < 0:
        raise ConfigError(f"excitation number must be >= 0, got {m}")
    if m > config.n_sites * (config.fock_cutoff + 1):
        raise ConfigError(
            f"sector m={m} exceeds the capacity of {config.n_sites} sites "
            f"with cutoff {config.fock_cutoff}")
    n = config.n_sites
    states = []
    for n_phot in range(max(0, m - n), min(m, n * config.fock_cutoff) + 1):
        for ph in _photon_tuples(n, n_phot, config.fock_cutoff):
            for qb in _qubit_tuples(n, m - n_phot):
                states.append(ph + qb)
    states.sort()
    return SectorBasis(config=config, sector=m, states=tuple(states),
                       index={s: i for i, s in enumerate(states)})


@dataclass(frozen=True, eq=False)
class SparseOperator:
    """Sparse complex matrix mapping one sector basis into another.

    ``cols`` is the domain, ``rows`` the codomain; entries with duplicate
    (row, col) pairs are summed when constructed via :meth:`from_entries`.
    """

    rows: SectorBasis
    cols: SectorBasis
    matrix: sp.csr_matrix

    @classmethod
    def from_entries(cls, rows: SectorBasis, cols: SectorBasis,
                     entries) -> "SparseOperator":
        if entries:
            r, c, v = zip(*entries)
        else:
            r, c, v = (), (), ()
        r = np.asarray(r, dtype=np.int64)
        c = np.asarray(c, dtype=np.int64)
        if len(r) and (r.min() < 0 or r.max() >= rows.dim
                       or c.min() < 0 or c.max() >= cols.dim):
            raise ValueError("entry index outside basis dimensions")
        m = sp.coo_matrix((np.asarray(v, dtype=np.complex128), (r, c)),
                          shape=(rows.dim, cols.dim)).tocsr()
        m.sum_duplicates()
        return cls(rows=rows, cols=cols, matrix=m)

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    @property
    def nnz(self) -> int:
        return self.matrix.nnz

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def dag(self) -> "SparseOperator":
        return SparseOperator(rows=self.cols, cols=self.rows,
                              matrix=self.matrix.conj().T.tocsr())

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return self.matrix @ vec

    def is_hermitian(self, tol: float = 0.0) -> bool:
        if self.rows is not self.cols and not self.rows.same_sector(self.cols):
            return False
        d = self.matrix - self.matrix.conj().T
        return (np.abs(d.data) <= tol).all() if d.nnz else True

    def __add__(self, other: "SparseOperator") -> "SparseOperator":
        self._check_same_spaces(other)
        return SparseOperator(self.rows, self.cols, self.matrix + other.matrix)

    def __sub__(self, other: "SparseOperator") -> "SparseOperator":
        self._check_same_spaces(other)
        return SparseOperator(self.rows, self.cols, self.matrix - other.matrix)

    def __mul__(self, scalar) -> "SparseOperator":
        return SparseOperator(self.rows, self.cols, self.matrix * scalar)

    __rmul__ = __mul__

    def __matmul__(self, other: "SparseOperator") -> "SparseOperator":
        if not self.cols.same_sector(other.rows):
            raise SectorMismatchError(
                "operator composition: domain/codomain sectors differ")
        return SparseOperator(self.rows, other.cols,
                              (self.matrix @ other.matrix).tocsr())

    def _check_same_spaces(self, other: "SparseOperator"):
        if not (self.rows.same_sector(other.rows)
                and self.cols.same_sector(other.cols)):
            raise SectorMismatchError("operators act on different sectors")


def ladder_op(basis_from: SectorBasis, basis_to: SectorBasis, site: int,
              kind: str) -> SparseOperator:
    """Site-local ladder/Pauli operator as a matrix from one sector to another.

    ``site`` is 1-based.  Photon operators respect the Fock cutoff: matrix
    elements that would leave the truncated space are dropped.
    """
    if kind not in _KIND_DELTA:
        raise ValueError(f"unknown operator kind {kind!r}")
    if not (1 <= site <= basis_from.n_sites):
        raise ValueError(f"site {site} outside [1, {basis_from.n_sites}]")
    if basis_from.config != basis_to.config:
        raise SectorMismatchError("bases built from different lattice configs")
    if basis_to.sector != basis_from.sector + _KIND_DELTA[kind]:
        raise SectorMismatchError(
            f"{kind} changes the excitation number by {_KIND_DELTA[kind]}, "
            f"but sectors are {basis_from.sector} -> {basis_to.sector}")

    n_sites = basis_from.n_sites
    cutoff = basis_from.config.fock_cutoff
    j = site - 1
    entries = []
    for col, state in enumerate(basis_from.states):
        n_j = state[j]
        s_j = state[n_sites + j]
        if kind == "qubit_z":
            entries.append((col, col, 2 * s_j - 1.0))
            continue
        if kind == "photon_number":
            entries.append((col, col, float(n_j)))
            continue
        if kind == "annihilate_photon":
            if n_j == 0:
                continue
            new = state[:j] + (n_j - 1,) + state[j + 1:]
            amp = np.sqrt(n_j)
        elif kind == "create_photon":
            if n_j + 1 > cutoff:
                continue
            new = state[:j] + (n_j + 1,) + state[j + 1:]
            amp = np.sqrt(n_j + 1)
        elif kind == "lower_qubit":
            if s_j == 0:
                continue
            new = state[:n_sites + j] + (0,) + state[n_sites + j + 1:]
            amp = 1.0
        else:  # raise_qubit
            if s_j == 1:
                continue
            new = state[:n_sites + j] + (1,) + state[n_sites + j + 1:]
            amp = 1.0
        entries.append((basis_to.index[new], col, amp))
    return SparseOperator.from_entries(basis_to, basis_from, entries)
