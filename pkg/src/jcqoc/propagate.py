"""Schrodinger propagation under a control schedule, with diagnostics.

The default step is T/4000; the state is never renormalized during
integration, so norm drift acts as an accuracy detector rather than being
hidden.  Energy fluctuation is sampled every few steps (default 10) because
the optimizer's cost path does not need it.
"""
from __future__ import annotations

import weakref
from dataclasses import dataclass

import numpy as np

from ._kernels import rk4_propagate
from .controls import ControlSchedule
from .errors import ConfigError, IntegrationAccuracyError
from .fockspace import SectorBasis
from .model import operator_templates
from .spectrum import StateVector

DEFAULT_STEPS = 4000
NORM_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class SectorPropagator:
    """Pre-extracted sparse template data for the RK4 kernel."""

    basis: SectorBasis
    a_data: np.ndarray
    a_indices: np.ndarray
    a_indptr: np.ndarray
    b_data: np.ndarray
    b_indices: np.ndarray
    b_indptr: np.ndarray
    diag: np.ndarray

    @classmethod
    def build(cls, basis: SectorBasis) -> "SectorPropagator":
        t = operator_templates(basis)
        a = t.coupling.matrix
        b = (-1.0) * t.hopping.matrix  # H_int = -J * hopping_sum = J * b
        cfg = basis.config
        diag = (cfg.omega_c * t.photon_number.matrix.diagonal().real
                + cfg.omega_z * t.qubit_excitation.matrix.diagonal().real)
        return cls(basis=basis,
                   a_data=a.data.astype(np.complex128),
                   a_indices=a.indices.astype(np.int64),
                   a_indptr=a.indptr.astype(np.int64),
                   b_data=b.data.astype(np.complex128),
                   b_indices=b.indices.astype(np.int64),
                   b_indptr=b.indptr.astype(np.int64),
                   diag=np.ascontiguousarray(diag, dtype=np.float64))

    def run(self, psi: np.ndarray, g_stages: np.ndarray, j_stages: np.ndarray,
            dt: float, n_steps: int, sample_steps: np.ndarray) -> np.ndarray:
        return rk4_propagate(self.a_data, self.a_indices, self.a_indptr,
                             self.b_data, self.b_indices, self.b_indptr,
                             self.diag, psi, g_stages, j_stages, dt, n_steps,
                             sample_steps)

    def h_apply(self, psi: np.ndarray, g: float, j: float) -> np.ndarray:
        """H(g, J) |psi> using scipy for one-off expectation values."""
        t = operator_templates(self.basis)
        return (g * (t.coupling.matrix @ psi)
                - j * (t.hopping.matrix @ psi)
                + self.diag * psi)


_propagator_cache: "weakref.WeakKeyDictionary[SectorBasis, SectorPropagator]" = \
    weakref.WeakKeyDictionary()


def sector_propagator(basis: SectorBasis) -> SectorPropagator:
    prop = _propagator_cache.get(basis)
    if prop is None:
        prop = SectorPropagator.build(basis)
        _propagator_cache[basis] = prop
    return prop


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled record of one propagation."""

    times: np.ndarray
    g_vs_t: np.ndarray
    j_vs_t: np.ndarray
    fidelity_vs_t: np.ndarray | None
    delta_e_vs_t: np.ndarray
    delta_e_ave: float
    final_state: StateVector
    norm_drift_max: float
    states: tuple[StateVector, ...] | None = None

    @property
    def total_time(self) -> float:
        return float(self.times[-1])


def resolve_steps(total_time: float, dt: float | None) -> tuple[int, float]:
    """Number of steps and the exact step realizing it."""
    if dt is None:
        n_steps = DEFAULT_STEPS
    else:
        if not 0 < dt < total_time:
            raise ConfigError(f"dt must satisfy 0 < dt < T, got dt={dt}, T={total_time}")
        n_steps = max(1, int(round(total_time / dt)))
    return n_steps, total_time / n_steps


def evolve(psi0: StateVector, schedule: ControlSchedule,
           total_time: float | None = None, dt: float | None = None, *,
           target: StateVector | None = None, sample_every: int = 10,
           keep_states: bool = False, norm_tol: float = NORM_TOL) -> Trajectory:
    """Integrate the time-dependent Schrodinger equation over [0, T].

    ``target`` enables the fidelity-vs-time record.  Raises
    :class:`IntegrationAccuracyError` when the sampled norm drifts by more
    than ``norm_tol`` (the fix is a smaller ``dt``, not renormalization).
    """
    if total_time is None:
        total_time = schedule.total_time
    elif abs(total_time - schedule.total_time) > 1e-12 * max(1.0, total_time):
        raise ConfigError(
            f"schedule covers [0, {schedule.total_time}], requested T={total_time}")
    n_steps, dt = resolve_steps(total_time, dt)
    if sample_every < 1:
        raise ConfigError("sample_every must be >= 1")

    prop = sector_propagator(psi0.basis)
    g_stages, j_stages = schedule.stage_values(n_steps)
    sample_steps = np.arange(0, n_steps + 1, sample_every, dtype=np.int64)
    if sample_steps[-1] != n_steps:
        sample_steps = np.append(sample_steps, n_steps)
    samples = prop.run(psi0.amplitudes, g_stages, j_stages, dt, n_steps,
                       sample_steps)

    times = sample_steps * dt
    norms = np.linalg.norm(samples, axis=1)
    norm_drift = float(np.max(np.abs(norms - 1.0)))
    if norm_drift > norm_tol:
        raise IntegrationAccuracyError(
            f"norm drift {norm_drift:.3e} exceeds {norm_tol:.1e}; reduce dt "
            f"(current dt={dt:.3e})")

    g_s, j_s = schedule.values(times)
    g_s = np.atleast_1d(np.asarray(g_s, dtype=np.float64))
    j_s = np.atleast_1d(np.asarray(j_s, dtype=np.float64))
    delta_e = np.empty(len(sample_steps))
    for k in range(len(sample_steps)):
        psi = samples[k]
        u = prop.h_apply(psi, g_s[k], j_s[k])
        e = np.vdot(psi, u).real
        e2 = np.vdot(u, u).real
        delta_e[k] = np.sqrt(max(e2 - e * e, 0.0))
    delta_e_ave = float(np.trapezoid(delta_e, times) / total_time)

    final_state = StateVector(psi0.basis, samples[-1])
    fid_t = None
    if target is not None:
        fid_t = np.array([
            min(abs(np.vdot(target.amplitudes, samples[k])) ** 2, 1.0)
            for k in range(len(sample_steps))])
    states = None
    if keep_states:
        states = tuple(StateVector(psi0.basis, samples[k])
                       for k in range(len(sample_steps)))
    return Trajectory(times=times, g_vs_t=np.asarray(g_s), j_vs_t=np.asarray(j_s),
                      fidelity_vs_t=fid_t, delta_e_vs_t=delta_e,
                      delta_e_ave=delta_e_ave, final_state=final_state,
                      norm_drift_max=norm_drift, states=states)


def final_overlap(psi0: StateVector, schedule: ControlSchedule, n_steps: int,
                  target: StateVector, norm_tol: float = 1e-5) -> float:
    """Lean propagation returning only |<target|psi(T)>|^2 (optimizer path).

    The drift tolerance is looser than on the trajectory path because the
    optimizer deliberately runs at a coarser step and explores violently
    clipped waveforms; the resulting cost bias stays far below the
    optimization resolution.
    """
    prop = sector_propagator(psi0.basis)
    g_stages, j_stages = schedule.stage_values(n_steps)
    dt = schedule.total_time / n_steps
    sample_steps = np.array([n_steps], dtype=np.int64)
    final = prop.run(psi0.amplitudes, g_stages, j_stages, dt, n_steps,
                     sample_steps)[0]
    drift = abs(np.linalg.norm(final) - 1.0)
    if drift > norm_tol:
        raise IntegrationAccuracyError(
            f"norm drift {drift:.3e} exceeds {norm_tol:.1e}; reduce dt")
    return float(min(abs(np.vdot(target.amplitudes, final)) ** 2, 1.0))


def energy_fluctuation(psi: StateVector, h) -> float:
    """Instantaneous energy spread sqrt(<H^2> - <H>^2), clamped at zero."""
    u = h.apply(psi.amplitudes)
    e = np.vdot(psi.amplitudes, u).real
    e2 = np.vdot(u, u).real
    return float(np.sqrt(max(e2 - e * e, 0.0)))


def average_energy_fluctuation(traj: Trajectory) -> float:
    """Time average (1/T) integral of the sampled energy fluctuation."""
    if len(traj.times) < 2:
        raise ConfigError("trajectory needs at least two samples")
    return float(np.trapezoid(traj.delta_e_vs_t, traj.times) / traj.total_time)


def trajectory_table(traj: Trajectory) -> np.ndarray:
    """Trajectory as columns (t, g, J, fidelity, delta_e) for export."""
    fid = traj.fidelity_vs_t
    if fid is None:
        fid = np.full_like(traj.delta_e_vs_t, np.nan)
    return np.column_stack([traj.times, traj.g_vs_t, traj.j_vs_t, fid,
                            traj.delta_e_vs_t])
