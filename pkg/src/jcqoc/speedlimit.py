"""Quantum-speed-limit estimate from state distance and energy fluctuation."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import UndefinedSpeedLimitError
from .propagate import Trajectory
from .spectrum import StateVector, bures_angle


@dataclass(frozen=True)
class QslEstimate:
    """Minimal-time estimate: Bures angle over average energy fluctuation."""

    distance: float
    delta_e_ave: float
    t_qsl: float


def estimate_qsl(psi0: StateVector, psi_target: StateVector,
                 traj: Trajectory) -> QslEstimate:
    """Estimate the speed limit for reaching ``psi_target`` from ``psi0``.

    The numerator is the Hilbert-space distance between the boundary
    states; the denominator is the average energy fluctuation of the
    trajectory that was actually evolved.  The ratio is a rough lower
    bound on the evolution time, useful for qualitative comparison with
    threshold times.
    """
    if traj.delta_e_ave <= 0.0:
        raise UndefinedSpeedLimitError(
            "average energy fluctuation is zero (stationary evolution)")
    distance = bures_angle(psi0, psi_target)
    return QslEstimate(distance=distance, delta_e_ave=traj.delta_e_ave,
                       t_qsl=distance / traj.delta_e_ave)
