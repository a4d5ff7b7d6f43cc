"""Sector enumeration and ladder operators against a brute-force oracle."""
import itertools

import numpy as np
import pytest

from jcqoc import (ConfigError, LatticeConfig, SectorMismatchError,
                   enumerate_sector, ladder_op)


def brute_force_sector(n_sites, m, cutoff):
    """Independent oracle: filter the full product space by total excitation."""
    out = []
    for ns in itertools.product(range(cutoff + 1), repeat=n_sites):
        for ss in itertools.product((0, 1), repeat=n_sites):
            if sum(ns) + sum(ss) == m:
                out.append(ns + ss)
    return sorted(out)


@pytest.mark.parametrize("m,expected_dim", [(0, 1), (1, 8), (2, 32), (3, 88),
                                            (4, 192)])
def test_sector_dimensions_n4(m, expected_dim):
    config = LatticeConfig(n_sites=4, n_excitations=4, fock_cutoff=4)
    basis = enumerate_sector(config, m)
    oracle = brute_force_sector(4, m, 4)
    assert basis.dim == expected_dim
    assert basis.dim == len(oracle)
    assert list(basis.states) == oracle


def test_single_site_sectors():
    config = LatticeConfig(n_sites=1, n_excitations=1)
    vacuum = enumerate_sector(config, 0)
    assert vacuum.dim == 1
    assert vacuum.states == ((0, 0),)
    doublet = enumerate_sector(config, 1)
    assert doublet.dim == 2
    assert set(doublet.states) == {(1, 0), (0, 1)}


def test_excitation_sum_holds_everywhere():
    config = LatticeConfig(n_sites=3, n_excitations=3)
    for m in range(4):
        basis = enumerate_sector(config, m)
        for state in basis.states:
            assert sum(state) == m


def test_index_is_lexicographic_bijection():
    config = LatticeConfig(n_sites=3, n_excitations=2, fock_cutoff=2)
    basis = enumerate_sector(config, 2)
    assert list(basis.states) == sorted(basis.states)
    assert sorted(basis.index.values()) == list(range(basis.dim))
    for state, pos in basis.index.items():
        assert basis.states[pos] == state


def test_rejects_negative_excitation():
    config = LatticeConfig(n_sites=2, n_excitations=2)
    with pytest.raises(ConfigError):
        enumerate_sector(config, -1)


def test_config_validation():
    with pytest.raises(ConfigError):
        LatticeConfig(n_sites=0, n_excitations=0)
    with pytest.raises(ConfigError):
        LatticeConfig(n_sites=2, n_excitations=3, fock_cutoff=2)


def test_annihilation_matrix_elements():
    config = LatticeConfig(n_sites=1, n_excitations=2, fock_cutoff=2)
    m2 = enumerate_sector(config, 2)
    m1 = enumerate_sector(config, 1)
    a = ladder_op(m2, m1, 1, "annihilate_photon")
    # a|1,up> = |0,up>, a|2,down> = sqrt(2)|1,down>
    col_1up = m2.index[(1, 1)]
    col_2dn = m2.index[(2, 0)]
    dense = a.to_dense()
    assert dense[m1.index[(0, 1)], col_1up] == pytest.approx(1.0)
    assert dense[m1.index[(1, 0)], col_2dn] == pytest.approx(np.sqrt(2))


def test_qubit_lowering_and_zero_rows():
    config = LatticeConfig(n_sites=1, n_excitations=1)
    m1 = enumerate_sector(config, 1)
    m0 = enumerate_sector(config, 0)
    s_minus = ladder_op(m1, m0, 1, "lower_qubit")
    dense = s_minus.to_dense()
    assert dense[0, m1.index[(0, 1)]] == pytest.approx(1.0)
    # |1,down> has the qubit already down: zero column
    assert dense[0, m1.index[(1, 0)]] == 0.0


def test_creation_is_adjoint_of_annihilation():
    config = LatticeConfig(n_sites=2, n_excitations=2)
    m2 = enumerate_sector(config, 2)
    m1 = enumerate_sector(config, 1)
    for site in (1, 2):
        a = ladder_op(m2, m1, site, "annihilate_photon")
        a_dag = ladder_op(m1, m2, site, "create_photon")
        assert np.array_equal(a_dag.to_dense(), a.dag().to_dense())


def test_photon_number_equals_adag_a():
    config = LatticeConfig(n_sites=2, n_excitations=2)
    m2 = enumerate_sector(config, 2)
    m1 = enumerate_sector(config, 1)
    for site in (1, 2):
        a = ladder_op(m2, m1, site, "annihilate_photon")
        a_dag = ladder_op(m1, m2, site, "create_photon")
        n_op = ladder_op(m2, m2, site, "photon_number")
        # equal up to the rounding of sqrt(n)*sqrt(n)
        diff = (a_dag @ a).to_dense() - n_op.to_dense()
        assert np.max(np.abs(diff)) < 1e-15


def test_qubit_z_eigenvalues():
    config = LatticeConfig(n_sites=1, n_excitations=1)
    m1 = enumerate_sector(config, 1)
    z = ladder_op(m1, m1, 1, "qubit_z").to_dense()
    assert z[m1.index[(0, 1)], m1.index[(0, 1)]] == 1.0
    assert z[m1.index[(1, 0)], m1.index[(1, 0)]] == -1.0


def test_sector_mismatch_and_site_range_errors():
    config = LatticeConfig(n_sites=2, n_excitations=2)
    m2 = enumerate_sector(config, 2)
    m1 = enumerate_sector(config, 1)
    with pytest.raises(SectorMismatchError):
        ladder_op(m2, m2, 1, "annihilate_photon")
    with pytest.raises(SectorMismatchError):
        ladder_op(m2, m1, 1, "photon_number")
    with pytest.raises(ValueError):
        ladder_op(m2, m1, 3, "annihilate_photon")
    with pytest.raises(ValueError):
        ladder_op(m2, m1, 0, "annihilate_photon")


def test_cutoff_truncates_creation():
    config = LatticeConfig(n_sites=1, n_excitations=2, fock_cutoff=2)
    m2 = enumerate_sector(config, 2)
    m3 = enumerate_sector(config, 3)
    a_dag = ladder_op(m2, m3, 1, "create_photon")
    # |2,down> cannot gain a third photon at cutoff 2; |2,up> does not exist
    col = m2.index[(2, 0)]
    assert np.all(a_dag.to_dense()[:, col] == 0.0)
