"""Robustness of an optimized pulse against Gaussian control errors.

Both couplings receive independent additive Gaussian offsets, drawn on a
100-node grid and held constant in between, mimicking waveform-generator
noise on the already-programmed pulse.  The mean fidelity over many error
realizations decays only slowly with the error strength.
"""
import numpy as np

from jcqoc import (Constraints, Couplings, LatticeConfig, OptimizerOptions,
                   build_problem, noise_robustness, optimize_pulse)

problem = build_problem(LatticeConfig(n_sites=4, n_excitations=4),
                        initial=Couplings(g=0.0, j_hop=0.5),
                        target=Couplings(g=1.0, j_hop=0.02),
                        constraints=Constraints(g_max=4.0, j_max=2.0),
                        total_time=3.30 * np.pi)

print("optimizing a reference pulse (stops at fidelity 0.99)...")
report = optimize_pulse(problem, OptimizerOptions(
    max_iterations=20_000, restarts=1, seed=1, stop_fidelity=0.99, workers=2))
print(f"noiseless fidelity: {report.best_fidelity:.4f}\n")

points = noise_robustness(problem, report.best_params,
                          sigma_list=[0.0, 0.01, 0.02, 0.03, 0.04, 0.05],
                          n_samples=100, seed=7, workers=2)
print("  sigma   mean fidelity   std")
for p in points:
    print(f"  {p.sigma:5.2f}   {p.mean_fidelity:11.4f}   {p.std_fidelity:.4f}")
print("\nsample i reuses the same underlying error shape for every sigma,")
print("so the decay with sigma is smooth rather than noisy.")
