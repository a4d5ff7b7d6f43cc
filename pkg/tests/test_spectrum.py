"""Ground-state solving, fidelity metrics and analytic limiting states."""
import numpy as np
import pytest

from jcqoc import (Couplings, DegenerateGroundStateError, LatticeConfig,
                   SectorMismatchError, SparseOperator, StateVector,
                   ZeroPhotonDensityError, analytic_mi_state, analytic_sf_state,
                   build_ht, bures_angle, enumerate_sector, fidelity,
                   ground_state, photon_correlator, spdm)


def diag_operator(basis, values):
    entries = [(i, i, v) for i, v in enumerate(values)]
    return SparseOperator.from_entries(basis, basis, entries)


@pytest.fixture(scope="module")
def unit_filling():
    config = LatticeConfig(n_sites=4, n_excitations=4)
    basis = enumerate_sector(config, 4)
    return config, basis


def test_ground_state_diagonal(unit_filling):
    config = LatticeConfig(n_sites=1, n_excitations=2, fock_cutoff=2)
    basis = enumerate_sector(config, 2)
    assert basis.dim == 2
    h = diag_operator(basis, [1.0, 0.0])
    energy, psi = ground_state(h)
    assert energy == 0.0
    assert abs(psi.amplitudes[1]) == pytest.approx(1.0)


def test_degenerate_ground_state_raises():
    config = LatticeConfig(n_sites=1, n_excitations=2, fock_cutoff=2)
    basis = enumerate_sector(config, 2)
    with pytest.raises(DegenerateGroundStateError):
        ground_state(diag_operator(basis, [0.5, 0.5]))


def test_sf_limit_matches_exact_ground_state(unit_filling):
    config, basis = unit_filling
    _, psi = ground_state(build_ht(basis, Couplings(g=0.0, j_hop=0.5)))
    assert fidelity(psi, analytic_sf_state(config)) > 1 - 1e-10


def test_mi_limit_matches_exact_ground_state(unit_filling):
    config, basis = unit_filling
    _, psi = ground_state(build_ht(basis, Couplings(g=1.0, j_hop=0.0)))
    assert fidelity(psi, analytic_mi_state(config, g=1.0)) > 1 - 1e-10


def test_mi_oracle_single_cell():
    config = LatticeConfig(n_sites=1, n_excitations=1)
    psi = analytic_mi_state(config, g=1.0)
    basis = psi.basis
    amps = psi.amplitudes
    assert amps[basis.index[(1, 0)]] == pytest.approx(1 / np.sqrt(2))
    assert amps[basis.index[(0, 1)]] == pytest.approx(-1 / np.sqrt(2))


def test_sf_oracle_single_cell():
    config = LatticeConfig(n_sites=1, n_excitations=1)
    psi = analytic_sf_state(config)
    assert abs(psi.amplitudes[psi.basis.index[(1, 0)]]) == pytest.approx(1.0)


def test_oracles_are_normalized():
    config = LatticeConfig(n_sites=4, n_excitations=4)
    for state in (analytic_sf_state(config), analytic_mi_state(config, 1.0)):
        assert np.linalg.norm(state.amplitudes) == pytest.approx(1.0, abs=1e-12)


def test_ground_energy_below_rayleigh_quotients(unit_filling):
    _, basis = unit_filling
    h = build_ht(basis, Couplings(g=0.8, j_hop=0.3))
    energy, _ = ground_state(h)
    dense = h.to_dense()
    rng = np.random.default_rng(5)
    for _ in range(100):
        v = rng.standard_normal(basis.dim) + 1j * rng.standard_normal(basis.dim)
        v /= np.linalg.norm(v)
        assert energy <= np.vdot(v, dense @ v).real + 1e-12


def test_fidelity_symmetry_and_phase_invariance(unit_filling):
    _, basis = unit_filling
    rng = np.random.default_rng(7)
    a = StateVector(basis, rng.standard_normal(basis.dim)
                    + 1j * rng.standard_normal(basis.dim))
    b = StateVector(basis, rng.standard_normal(basis.dim)
                    + 1j * rng.standard_normal(basis.dim))
    assert fidelity(a, b) == pytest.approx(fidelity(b, a), abs=1e-15)
    rotated = StateVector(basis, np.exp(1.3j) * b.amplitudes)
    assert fidelity(a, rotated) == pytest.approx(fidelity(a, b), abs=1e-14)
    assert fidelity(a, a) == pytest.approx(1.0, abs=1e-14)


def test_bures_angle_limits(unit_filling):
    _, basis = unit_filling
    e0 = np.zeros(basis.dim)
    e0[0] = 1.0
    e1 = np.zeros(basis.dim)
    e1[1] = 1.0
    a, b = StateVector(basis, e0), StateVector(basis, e1)
    assert bures_angle(a, a) == 0.0
    assert bures_angle(a, b) == pytest.approx(np.pi / 2)


def test_fidelity_rejects_basis_mismatch(unit_filling):
    _, basis = unit_filling
    other = enumerate_sector(LatticeConfig(n_sites=4, n_excitations=3), 3)
    a = StateVector(basis, np.eye(basis.dim)[0])
    b = StateVector(other, np.eye(other.dim)[0])
    with pytest.raises(SectorMismatchError):
        fidelity(a, b)


def test_initial_target_distance_golden(unit_filling):
    _, basis = unit_filling
    _, psi0 = ground_state(build_ht(basis, Couplings(g=0.0, j_hop=0.5)))
    _, psi_t = ground_state(build_ht(basis, Couplings(g=1.0, j_hop=0.02)))
    assert bures_angle(psi0, psi_t) / np.pi == pytest.approx(0.469, abs=0.002)
    assert fidelity(psi0, psi_t) == pytest.approx(np.cos(0.469 * np.pi) ** 2,
                                                  abs=5e-4)


def test_spdm_diagonal_and_limits(unit_filling):
    config, basis = unit_filling
    sf = analytic_sf_state(config)
    assert spdm(sf, 1, 1) == pytest.approx(1.0)
    # condensate: full coherence between any pair of sites
    assert spdm(sf, 1, 3) == pytest.approx(1.0, abs=1e-12)
    mi = analytic_mi_state(config, g=1.0)
    assert spdm(mi, 1, 1) == pytest.approx(1.0)
    assert abs(spdm(mi, 1, 3)) == pytest.approx(0.0, abs=1e-14)


def test_spdm_zero_density_error(unit_filling):
    _, basis = unit_filling
    amps = np.zeros(basis.dim)
    amps[basis.index[(0, 0, 0, 0, 1, 1, 1, 1)]] = 1.0  # all excitations in qubits
    psi = StateVector(basis, amps)
    with pytest.raises(ZeroPhotonDensityError):
        spdm(psi, 1, 3)


def test_correlator_matrix_hermitian(unit_filling):
    _, basis = unit_filling
    _, psi = ground_state(build_ht(basis, Couplings(g=0.9, j_hop=0.4)))
    n = basis.n_sites
    corr = np.array([[photon_correlator(psi, i, j)
                      for j in range(1, n + 1)] for i in range(1, n + 1)])
    assert np.max(np.abs(corr - corr.conj().T)) < 1e-12


def test_cross_site_coherence_grows_with_hopping(unit_filling):
    _, basis = unit_filling
    values = []
    for j_hop in np.linspace(0.02, 1.0, 8):
        _, psi = ground_state(build_ht(basis, Couplings(g=1.0, j_hop=j_hop)))
        values.append(abs(spdm(psi, 1, 3)))
    assert np.all(np.diff(values) > 0)
