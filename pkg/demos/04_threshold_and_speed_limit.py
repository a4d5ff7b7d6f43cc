"""Threshold time and the speed-limit estimate.

Below some total duration the optimizer cannot reach the target fidelity
no matter how the pulse wiggles; the smallest duration that succeeds is
the threshold time.  The ratio of the initial-target distance to the
average energy fluctuation of the evolved trajectory gives a rough
speed-limit estimate that tracks the same physics.

To keep the demo quick the threshold fidelity is set to 0.95 with small
search budgets; the acceptance suite runs the 0.99 scans of the full
study.
"""
import time

import numpy as np

from jcqoc import (Constraints, Couplings, LatticeConfig, OptimizerOptions,
                   build_problem, estimate_qsl, evolve, optimize_pulse,
                   params_from_dict, threshold_time)

problem = build_problem(LatticeConfig(n_sites=4, n_excitations=4),
                        initial=Couplings(g=0.0, j_hop=0.5),
                        target=Couplings(g=1.0, j_hop=0.02),
                        constraints=Constraints(g_max=4.0, j_max=2.0),
                        total_time=3.30 * np.pi,
                        threshold_fidelity=0.95)

opts = OptimizerOptions(max_iterations=4000, restarts=1, seed=2,
                        stop_fidelity=0.96, workers=2)
grid = [t * np.pi for t in (0.75, 1.0, 1.25, 1.5, 1.75)]
t0 = time.perf_counter()
result = threshold_time(problem.constraints, problem, grid, opts)
print(f"scan finished in {(time.perf_counter() - t0) / 60:.1f} min")
for t, fid in result.scan_points:
    marker = "<- threshold" if result.found and t == result.t_threshold else ""
    print(f"  T = {t / np.pi:5.2f} pi: best fidelity {fid:.4f} {marker}")

if result.found:
    at_threshold = problem.with_time(result.t_threshold)
    schedule = at_threshold.schedule(result.best_report.best_params)
    traj = evolve(at_threshold.psi0, schedule, target=at_threshold.psi_target,
                  norm_tol=1e-6)
    est = estimate_qsl(at_threshold.psi0, at_threshold.psi_target, traj)
    print(f"\nat T_th = {result.t_threshold / np.pi:.2f} pi:")
    print(f"  state distance        : {est.distance / np.pi:.3f} pi")
    print(f"  avg energy fluctuation: {est.delta_e_ave:.4f}")
    print(f"  speed-limit estimate  : {est.t_qsl / np.pi:.2f} pi "
          f"(shorter than T_th, as it should be)")
