"""Time evolution: stationary states, Rabi period, drift and invariances."""
import numpy as np
import pytest

from jcqoc import (ConfigError, Constraints, ControlSchedule, Couplings,
                   CrabParams, IntegrationAccuracyError, LatticeConfig,
                   RampSpec, StateVector, average_energy_fluctuation,
                   build_ht, energy_fluctuation, enumerate_sector, evolve,
                   final_overlap, fidelity, ground_state)
from jcqoc.propagate import Trajectory


def constant_schedule(g, j_hop, total_time):
    return ControlSchedule(ramp=RampSpec(g, g, j_hop, j_hop, total_time))


@pytest.fixture(scope="module")
def two_site():
    config = LatticeConfig(n_sites=2, n_excitations=2)
    basis = enumerate_sector(config, 2)
    return config, basis


def test_eigenstate_is_stationary(two_site):
    _, basis = two_site
    couplings = Couplings(g=0.6, j_hop=0.3)
    _, psi0 = ground_state(build_ht(basis, couplings))
    traj = evolve(psi0, constant_schedule(0.6, 0.3, 5.0), target=psi0)
    assert traj.fidelity_vs_t[-1] == pytest.approx(1.0, abs=1e-10)
    assert fidelity(traj.final_state, psi0) == pytest.approx(1.0, abs=1e-10)


def test_rabi_period_single_cell():
    g = 0.8
    period = np.pi / g
    config = LatticeConfig(n_sites=1, n_excitations=1)
    basis = enumerate_sector(config, 1)
    psi0 = StateVector(basis, np.eye(2)[basis.index[(1, 0)]])  # photon state
    total = 1.2 * period
    traj = evolve(psi0, constant_schedule(g, 0.0, total), target=psi0,
                  sample_every=1)
    # first full revival of the initial state
    mask = traj.times > 0.6 * period
    t_star = traj.times[mask][np.argmax(traj.fidelity_vs_t[mask])]
    assert abs(t_star - period) / period < 1e-3
    # halfway through, the excitation sits on the qubit
    k_half = np.argmin(np.abs(traj.times - period / 2))
    assert traj.fidelity_vs_t[k_half] < 1e-5


def test_adiabatic_golden_value():
    config = LatticeConfig(n_sites=4, n_excitations=4)
    basis = enumerate_sector(config, 4)
    _, psi0 = ground_state(build_ht(basis, Couplings(0.0, 0.5)))
    _, psi_t = ground_state(build_ht(basis, Couplings(1.0, 0.02)))
    ramp = RampSpec(0.0, 1.0, 0.5, 0.02, 5.27 * np.pi)
    traj = evolve(psi0, ControlSchedule(ramp=ramp), target=psi_t)
    assert traj.fidelity_vs_t[-1] == pytest.approx(0.6610, abs=0.01)
    assert traj.norm_drift_max < 1e-8


def test_energy_fluctuation_eigenstate_and_superposition():
    config = LatticeConfig(n_sites=1, n_excitations=1)
    basis = enumerate_sector(config, 1)
    g = 1.3
    h = build_ht(basis, Couplings(g=g, j_hop=0.0))
    _, psi = ground_state(h)
    # cancellation in <H^2> - <H>^2 leaves a |E| sqrt(eps) floor
    assert energy_fluctuation(psi, h) == pytest.approx(0.0, abs=1e-7)
    # equal superposition of the doublet E = +-g: spread is |E1-E2|/2 = g
    w, v = np.linalg.eigh(h.to_dense())
    sup = StateVector(basis, (v[:, 0] + v[:, 1]) / np.sqrt(2))
    assert energy_fluctuation(sup, h) == pytest.approx(g, abs=1e-12)


def test_average_energy_fluctuation_analytic():
    config = LatticeConfig(n_sites=1, n_excitations=1)
    basis = enumerate_sector(config, 1)
    psi = StateVector(basis, np.eye(2)[0])
    times = np.linspace(0.0, 2.0, 201)

    def synthetic(delta_e):
        return Trajectory(times=times, g_vs_t=np.zeros_like(times),
                          j_vs_t=np.zeros_like(times), fidelity_vs_t=None,
                          delta_e_vs_t=delta_e, delta_e_ave=np.nan,
                          final_state=psi, norm_drift_max=0.0)

    assert average_energy_fluctuation(
        synthetic(np.full_like(times, 0.7))) == pytest.approx(0.7)
    assert average_energy_fluctuation(
        synthetic(times / times[-1])) == pytest.approx(0.5, abs=1e-12)


def test_trajectory_average_consistency(two_site):
    _, basis = two_site
    _, psi0 = ground_state(build_ht(basis, Couplings(0.0, 0.5)))
    ramp = RampSpec(0.0, 1.0, 0.5, 0.02, 4.0)
    traj = evolve(psi0, ControlSchedule(ramp=ramp))
    assert traj.delta_e_ave == pytest.approx(
        average_energy_fluctuation(traj), abs=1e-10)


def test_step_halving_convergence():
    config = LatticeConfig(n_sites=4, n_excitations=4)
    basis = enumerate_sector(config, 4)
    _, psi0 = ground_state(build_ht(basis, Couplings(0.0, 0.5)))
    _, psi_t = ground_state(build_ht(basis, Couplings(1.0, 0.02)))
    total = 3.30 * np.pi
    rng = np.random.default_rng(13)
    params = CrabParams.from_vector(
        np.concatenate([rng.uniform(-1, 1, 32), rng.uniform(-0.5, 0.5, 16)]))
    schedule = ControlSchedule(ramp=RampSpec(0.0, 1.0, 0.5, 0.02, total),
                               params=params,
                               constraints=Constraints(2.0, 2.0))
    f_coarse = final_overlap(psi0, schedule, 4000, psi_t)
    f_fine = final_overlap(psi0, schedule, 8000, psi_t)
    assert abs(f_fine - f_coarse) < 1e-8


def test_global_phase_independence(two_site):
    _, basis = two_site
    _, psi0 = ground_state(build_ht(basis, Couplings(0.0, 0.5)))
    _, psi_t = ground_state(build_ht(basis, Couplings(1.0, 0.02)))
    rotated = StateVector(basis, np.exp(0.7j) * psi0.amplitudes)
    schedule = ControlSchedule(ramp=RampSpec(0.0, 1.0, 0.5, 0.02, 3.0))
    t1 = evolve(psi0, schedule, target=psi_t)
    t2 = evolve(rotated, schedule, target=psi_t)
    assert np.max(np.abs(t1.fidelity_vs_t - t2.fidelity_vs_t)) < 1e-12
    assert np.max(np.abs(t1.delta_e_vs_t - t2.delta_e_vs_t)) < 1e-12


def test_common_frequency_shift_invariance():
    couplings0 = Couplings(0.0, 0.5)
    couplings1 = Couplings(1.0, 0.02)
    results = []
    for shift in (0.0, 0.7):
        config = LatticeConfig(n_sites=2, n_excitations=2, omega_c=shift,
                               omega_z=shift)
        basis = enumerate_sector(config, 2)
        _, psi0 = ground_state(build_ht(basis, couplings0))
        _, psi_t = ground_state(build_ht(basis, couplings1))
        schedule = ControlSchedule(ramp=RampSpec(0.0, 1.0, 0.5, 0.02, 3.0))
        results.append(evolve(psi0, schedule, target=psi_t))
    base, shifted = results
    assert np.max(np.abs(base.fidelity_vs_t - shifted.fidelity_vs_t)) < 1e-9
    assert np.max(np.abs(base.delta_e_vs_t - shifted.delta_e_vs_t)) < 1e-9


def test_norm_drift_detection(two_site):
    _, basis = two_site
    _, psi0 = ground_state(build_ht(basis, Couplings(0.0, 0.5)))
    schedule = ControlSchedule(ramp=RampSpec(0.0, 2.0, 0.5, 2.0, 6.0))
    with pytest.raises(IntegrationAccuracyError):
        evolve(psi0, schedule, dt=2.0)


def test_evolve_validation(two_site):
    _, basis = two_site
    _, psi0 = ground_state(build_ht(basis, Couplings(0.0, 0.5)))
    schedule = ControlSchedule(ramp=RampSpec(0.0, 1.0, 0.5, 0.02, 3.0))
    with pytest.raises(ConfigError):
        evolve(psi0, schedule, total_time=4.0)
    with pytest.raises(ConfigError):
        evolve(psi0, schedule, dt=5.0)
    with pytest.raises(ConfigError):
        evolve(psi0, schedule, sample_every=0)
