"""Ground-state preparation in finite Jaynes-Cummings lattices with CRAB control.

The package prepares many-body ground states of a small Jaynes-Cummings
lattice by optimizing Fourier-parametrized coupling pulses, and quantifies
threshold times, speed-limit estimates, control-error robustness and
decoherence effects.  All quantities are dimensionless with the reference
qubit-cavity coupling as the energy unit (g = 1 corresponds to
2 pi x 100 MHz; an evolution time of 3.30 pi corresponds to 16.5 ns).
"""
from .controls import (Constraints, ControlSchedule, CrabParams, NoiseSpec,
                       RampSpec, apply_noise, crab_eval, envelope_s, ramp_eval,
                       waveform_table)
from .errors import (ConfigError, DegenerateGroundStateError,
                     IntegrationAccuracyError, SectorMismatchError,
                     ThresholdNotFoundError, UndefinedSpeedLimitError,
                     ZeroPhotonDensityError)
from .fockspace import (LatticeConfig, SectorBasis, SparseOperator,
                        enumerate_sector, ladder_op)
from .lindblad import (DecoherenceRates, DensityMatrix, DirectSumBasis,
                       LindbladResult, build_sector_sum_basis, evolve_lindblad)
from .model import (Couplings, OperatorTemplates, build_h0, build_hint,
                    build_ht, jc_analytic, operator_templates)
from .optimizer import (ControlProblem, NoisePoint, OptimizationReport,
                        OptimizerOptions, ThresholdResult, build_problem, cost,
                        nelder_mead, noise_robustness, optimize_pulse,
                        params_from_dict, random_params, reported_fidelity,
                        threshold_time)
from .propagate import (Trajectory, average_energy_fluctuation,
                        energy_fluctuation, evolve, final_overlap,
                        trajectory_table)
from .spectrum import (StateVector, analytic_mi_state, analytic_sf_state,
                       bures_angle, fidelity, ground_state, photon_correlator,
                       spdm)
from .speedlimit import QslEstimate, estimate_qsl

__version__ = "0.1.0"

__all__ = [
    "Constraints", "ControlSchedule", "CrabParams", "NoiseSpec", "RampSpec",
    "apply_noise", "crab_eval", "envelope_s", "ramp_eval", "waveform_table",
    "ConfigError", "DegenerateGroundStateError", "IntegrationAccuracyError",
    "SectorMismatchError", "ThresholdNotFoundError", "UndefinedSpeedLimitError",
    "ZeroPhotonDensityError",
    "LatticeConfig", "SectorBasis", "SparseOperator", "enumerate_sector",
    "ladder_op",
    "DecoherenceRates", "DensityMatrix", "DirectSumBasis", "LindbladResult",
    "build_sector_sum_basis", "evolve_lindblad",
    "Couplings", "OperatorTemplates", "build_h0", "build_hint", "build_ht",
    "jc_analytic", "operator_templates",
    "ControlProblem", "NoisePoint", "OptimizationReport", "OptimizerOptions",
    "ThresholdResult", "build_problem", "cost", "nelder_mead",
    "noise_robustness", "optimize_pulse", "params_from_dict", "random_params",
    "reported_fidelity", "threshold_time",
    "Trajectory", "average_energy_fluctuation", "energy_fluctuation", "evolve",
    "final_overlap", "trajectory_table",
    "StateVector", "analytic_mi_state", "analytic_sf_state", "bures_angle",
    "fidelity", "ground_state", "photon_correlator", "spdm",
    "QslEstimate", "estimate_qsl",
    "__version__",
]
