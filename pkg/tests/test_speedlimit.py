"""Speed-limit estimate: direct values, scaling and phase invariance."""
import numpy as np
import pytest

from jcqoc import (Couplings, LatticeConfig, StateVector,
                   UndefinedSpeedLimitError, build_ht, enumerate_sector,
                   estimate_qsl, ground_state)
from jcqoc.propagate import Trajectory


def make_pair():
    config = LatticeConfig(n_sites=2, n_excitations=2)
    basis = enumerate_sector(config, 2)
    e0 = np.zeros(basis.dim)
    e0[0] = 1.0
    e1 = np.zeros(basis.dim)
    e1[1] = 1.0
    return StateVector(basis, e0), StateVector(basis, e1)


def synthetic_trajectory(psi, delta_e_ave):
    times = np.linspace(0.0, 1.0, 11)
    return Trajectory(times=times, g_vs_t=np.zeros_like(times),
                      j_vs_t=np.zeros_like(times), fidelity_vs_t=None,
                      delta_e_vs_t=np.full_like(times, delta_e_ave),
                      delta_e_ave=delta_e_ave, final_state=psi,
                      norm_drift_max=0.0)


def test_orthogonal_pair_unit_fluctuation():
    a, b = make_pair()
    est = estimate_qsl(a, b, synthetic_trajectory(a, 1.0))
    assert est.distance == pytest.approx(np.pi / 2)
    assert est.t_qsl == pytest.approx(np.pi / 2)
    assert est.t_qsl == est.distance / est.delta_e_ave


def test_paper_pair_distance_numerator():
    config = LatticeConfig(n_sites=4, n_excitations=4)
    basis = enumerate_sector(config, 4)
    _, psi0 = ground_state(build_ht(basis, Couplings(0.0, 0.5)))
    _, psi_t = ground_state(build_ht(basis, Couplings(1.0, 0.02)))
    est = estimate_qsl(psi0, psi_t, synthetic_trajectory(psi0, 1.0))
    assert est.distance / np.pi == pytest.approx(0.469, abs=0.002)


def test_scaling_with_energy_fluctuation():
    a, b = make_pair()
    base = estimate_qsl(a, b, synthetic_trajectory(a, 0.5))
    scaled = estimate_qsl(a, b, synthetic_trajectory(a, 0.5 * 3.0))
    assert scaled.t_qsl == pytest.approx(base.t_qsl / 3.0)


def test_phase_invariance():
    a, b = make_pair()
    rotated = StateVector(a.basis, np.exp(0.4j) * a.amplitudes)
    t1 = estimate_qsl(a, b, synthetic_trajectory(a, 1.3))
    t2 = estimate_qsl(rotated, b, synthetic_trajectory(a, 1.3))
    assert t1.t_qsl == t2.t_qsl


def test_zero_fluctuation_rejected():
    a, b = make_pair()
    with pytest.raises(UndefinedSpeedLimitError):
        estimate_qsl(a, b, synthetic_trajectory(a, 0.0))
