"""Command-line front end: config ingestion, run orchestration, data export.

Every subcommand reads one JSON config file (a complete example ships in
``demos/config.example.json``), writes its artifacts under
``<out>/<subcommand>/`` and stamps them with the config hash, seed, package
version and wall time so any run can be replayed bit-for-bit.  Plotting is
out of scope: the CLI emits CSV/JSON data only.

Exit codes: 0 success, 1 invalid config, 2 numerical-accuracy failure,
3 threshold not found on the grid.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .controls import Constraints, ControlSchedule, RampSpec, waveform_table
from .errors import (ConfigError, DegenerateGroundStateError,
                     IntegrationAccuracyError)
from .fockspace import LatticeConfig, enumerate_sector
from .lindblad import (DecoherenceRates, DensityMatrix, build_sector_sum_basis,
                       evolve_lindblad)
from .model import Couplings, build_ht
from .optimizer import (ControlProblem, OptimizerOptions, build_problem,
                        noise_robustness, optimize_pulse, params_from_dict,
                        threshold_time)
from .propagate import evolve, trajectory_table
from .spectrum import (StateVector, bures_angle, fidelity, ground_state,
                       spdm)
from .speedlimit import estimate_qsl

SCHEMA_VERSION = 1

SUBCOMMANDS = ("ground", "spdm-map", "adiabatic", "optimize", "sweep",
               "threshold", "qsl", "noise", "lindblad")


def parse_time(value) -> float:
    """Times may be plain numbers or strings like '3.30pi'."""
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        text = value.strip().lower()
        if text.endswith("pi"):
            return float(text[:-2]) * np.pi
        return float(text)
    raise ConfigError(f"cannot parse time value {value!r}")


@dataclass
class RunConfig:
    """Validated run configuration; ``raw`` keeps the original dict for echo."""

    lattice: LatticeConfig
    initial: Couplings
    target: Couplings
    constraints: Constraints
    schedule_kind: str
    total_time: float
    dt: float | None
    optimizer: OptimizerOptions
    noise: dict
    decoherence: DecoherenceRates
    convention: str
    seed: int
    output_dir: Path
    workers: int
    raw: dict = field(repr=False)

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        try:
            raw = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        return cls.from_dict(raw)

    @classmethod
    def from_dict(cls, raw: dict) -> "RunConfig":
        try:
            lat = raw.get("lattice", {})
            lattice = LatticeConfig(
                n_sites=int(lat.get("n_sites", 4)),
                n_excitations=int(lat.get("n_excitations", 4)),
                fock_cutoff=lat.get("fock_cutoff"),
                omega_c=float(lat.get("omega_c", 0.0)),
                omega_z=float(lat.get("omega_z", 0.0)))
            init = raw.get("initial", {"g": 0.0, "j_hop": 0.5})
            targ = raw.get("target", {"g": 1.0, "j_hop": 0.02})
            delta = lattice.omega_c - lattice.omega_z
            initial = Couplings(g=float(init["g"]), j_hop=float(init["j_hop"]),
                                delta=delta)
            target = Couplings(g=float(targ["g"]), j_hop=float(targ["j_hop"]),
                               delta=delta)
            cons = raw.get("constraints", {"g_max": 2.0, "j_max": 2.0})
            constraints = Constraints(g_max=float(cons["g_max"]),
                                      j_max=float(cons["j_max"]))
            schedule_kind = raw.get("schedule", "crab")
            if schedule_kind not in ("adiabatic", "crab"):
                raise ConfigError(
                    f"schedule must be 'adiabatic' or 'crab', got {schedule_kind!r}")
            total_time = parse_time(raw.get("total_time", "3.30pi"))
            dt = raw.get("dt")
            if dt is not None:
                dt = float(dt)
                if not 0 < dt < total_time:
                    raise ConfigError(f"dt={dt} must lie in (0, T={total_time})")
            opt = raw.get("optimizer", {})
            optimizer = OptimizerOptions(
                max_iterations=int(opt.get("max_iterations", 150_000)),
                tolerance=float(opt.get("tolerance", 1e-8)),
                restarts=int(opt.get("restarts", 5)),
                seed=int(opt.get("seed", raw.get("seed", 0))),
                stop_fidelity=opt.get("stop_fidelity"),
                workers=int(raw.get("workers", 1)))
            deco = raw.get("decoherence", {})
            decoherence = DecoherenceRates(
                kappa=float(deco.get("kappa", 5e-5)),
                gamma=float(deco.get("gamma", 5e-5 / np.pi)),
                gamma_d=float(deco.get("gamma_d", 0.0)))
            return cls(lattice=lattice, initial=initial, target=target,
                       constraints=constraints, schedule_kind=schedule_kind,
                       total_time=total_time, dt=dt, optimizer=optimizer,
                       noise=raw.get("noise", {}),
                       decoherence=decoherence,
                       convention=raw.get("angular_convention", "literal"),
                       seed=int(raw.get("seed", 0)),
                       output_dir=Path(raw.get("output_dir", "runs")),
                       workers=int(raw.get("workers", 1)),
                       raw=raw)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"invalid config: {exc}") from exc

    def config_hash(self) -> str:
        canonical = json.dumps(self.raw, sort_keys=True).encode()
        return hashlib.sha256(canonical).hexdigest()[:16]

    def problem(self) -> ControlProblem:
        opt_steps = 2000
        report_steps = 4000
        if self.dt is not None:
            report_steps = max(1, int(round(self.total_time / self.dt)))
            opt_steps = max(1, report_steps // 2)
        return build_problem(self.lattice, self.initial, self.target,
                             self.constraints, self.total_time,
                             opt_steps=opt_steps, report_steps=report_steps,
                             convention=self.convention)


class _RunWriter:
    """Stamped CSV/JSON artifact writer for one subcommand invocation."""

    def __init__(self, config: RunConfig, subcommand: str):
        self.dir = config.output_dir / subcommand
        self.dir.mkdir(parents=True, exist_ok=True)
        self.t0 = time.perf_counter()
        self.meta = {
            "schema_version": SCHEMA_VERSION,
            "version": __version__,
            "subcommand": subcommand,
            "config_hash": config.config_hash(),
            "seed": config.seed,
        }

    def _stamp(self) -> dict:
        return dict(self.meta, wall_time_s=round(time.perf_counter() - self.t0, 3))

    def json(self, name: str, payload: dict) -> Path:
        path = self.dir / name
        path.write_text(json.dumps({"meta": self._stamp(), **payload},
                                   indent=2, sort_keys=True) + "\n")
        return path

    def csv(self, name: str, columns: list[str], rows: np.ndarray) -> Path:
        path = self.dir / name
        with path.open("w") as fh:
            for key, val in self._stamp().items():
                fh.write(f"# {key}: {val}\n")
            fh.write(",".join(columns) + "\n")
            for row in np.atleast_2d(rows):
                fh.write(",".join(f"{v:.12g}" for v in row) + "\n")
        return path


def _ground_pair(config: RunConfig):
    basis = enumerate_sector(config.lattice, config.lattice.n_excitations)
    e0, psi0 = ground_state(build_ht(basis, config.initial))
    e_t, psi_t = ground_state(build_ht(basis, config.target))
    return basis, (e0, psi0), (e_t, psi_t)


def _spdm_matrix(psi: StateVector) -> list[list[dict]]:
    n = psi.basis.n_sites
    out = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            val = spdm(psi, i, j)
            row.append({"re": val.real, "im": val.imag})
        out.append(row)
    return out


def cmd_ground(config: RunConfig, writer: _RunWriter, args) -> int:
    _, (e0, psi0), (e_t, psi_t) = _ground_pair(config)
    writer.csv("initial_state.csv", ["index", "re", "im"],
               np.column_stack([np.arange(psi0.dim),
                                psi0.amplitudes.real, psi0.amplitudes.imag]))
    writer.csv("target_state.csv", ["index", "re", "im"],
               np.column_stack([np.arange(psi_t.dim),
                                psi_t.amplitudes.real, psi_t.amplitudes.imag]))
    writer.json("ground.json", {
        "initial": {"energy": e0, "g": config.initial.g,
                    "j_hop": config.initial.j_hop, "spdm": _spdm_matrix(psi0)},
        "target": {"energy": e_t, "g": config.target.g,
                   "j_hop": config.target.j_hop, "spdm": _spdm_matrix(psi_t)},
        "overlap_fidelity": fidelity(psi0, psi_t),
        "bures_angle": bures_angle(psi0, psi_t),
        "bures_angle_over_pi": bures_angle(psi0, psi_t) / np.pi,
    })
    return 0


def cmd_spdm_map(config: RunConfig, writer: _RunWriter, args) -> int:
    """Cross-site coherence rho_1(1,3) over a (J, detuning) grid at fixed g.

    Emits real part, imaginary part and magnitude; which one a plot should
    show is left to the consumer.
    """
    grid = config.raw.get("spdm_map", {})
    g = float(grid.get("g", 1.0))
    j_values = grid.get("j_values") or np.linspace(
        float(grid.get("j_min", 0.02)), float(grid.get("j_max", 1.0)),
        int(grid.get("j_points", 25))).tolist()
    d_values = grid.get("delta_values") or np.linspace(
        float(grid.get("delta_min", -2.0)), float(grid.get("delta_max", 2.0)),
        int(grid.get("delta_points", 25))).tolist()
    site_i = int(grid.get("site_i", 1))
    site_j = int(grid.get("site_j", 3))
    basis = enumerate_sector(config.lattice, config.lattice.n_excitations)
    rows = []
    for delta in d_values:
        for j_hop in j_values:
            _, psi = ground_state(
                build_ht(basis, Couplings(g=g, j_hop=float(j_hop),
                                          delta=float(delta))))
            val = spdm(psi, site_i, site_j)
            rows.append([j_hop, delta, val.real, val.imag, abs(val)])
    writer.csv("spdm_map.csv", ["j_hop", "delta", "re", "im", "abs"],
               np.asarray(rows))
    return 0


def cmd_adiabatic(config: RunConfig, writer: _RunWriter, args) -> int:
    _, (_, psi0), (_, psi_t) = _ground_pair(config)
    ramp = RampSpec(config.initial.g, config.target.g, config.initial.j_hop,
                    config.target.j_hop, config.total_time)
    schedule = ControlSchedule(ramp=ramp, constraints=config.constraints)
    traj = evolve(psi0, schedule, dt=config.dt, target=psi_t)
    writer.csv("trajectory.csv", ["t", "g", "j_hop", "fidelity", "delta_e"],
               trajectory_table(traj))
    writer.json("adiabatic.json", {
        "total_time": config.total_time,
        "total_time_over_pi": config.total_time / np.pi,
        "final_fidelity": float(traj.fidelity_vs_t[-1]),
        "delta_e_ave": traj.delta_e_ave,
        "norm_drift_max": traj.norm_drift_max,
    })
    return 0


def _report_payload(config: RunConfig, problem: ControlProblem, report) -> dict:
    return {
        "config": config.raw,
        "total_time": problem.total_time,
        "total_time_over_pi": problem.total_time / np.pi,
        "constraints": {"g_max": problem.constraints.g_max,
                        "j_max": problem.constraints.j_max},
        "report": report.to_dict(),
    }


def cmd_optimize(config: RunConfig, writer: _RunWriter, args) -> int:
    problem = config.problem()
    report = optimize_pulse(problem, config.optimizer)
    writer.json("report.json", _report_payload(config, problem, report))
    schedule = problem.schedule(report.best_params)
    writer.csv("waveform.csv", ["t", "g", "j_hop"],
               waveform_table(schedule, 2001))
    traj = evolve(problem.psi0, schedule, target=problem.psi_target,
                  norm_tol=1e-6)
    writer.csv("trajectory.csv", ["t", "g", "j_hop", "fidelity", "delta_e"],
               trajectory_table(traj))
    return 0


def cmd_sweep(config: RunConfig, writer: _RunWriter, args) -> int:
    sweep = config.raw.get("sweep", {})
    t_values = [parse_time(t) for t in sweep.get(
        "t_values", ["2.0pi", "2.5pi", "3.0pi", "3.5pi", "4.0pi"])]
    problem = config.problem()
    rows = []
    for t_total in t_values:
        sub = problem.with_time(t_total)
        report = optimize_pulse(sub, config.optimizer)
        adiabatic = reported_fidelity_for_schedule(
            sub, ControlSchedule(ramp=sub.ramp, constraints=config.constraints))
        rows.append([t_total, t_total / np.pi, report.best_fidelity, adiabatic])
    writer.csv("sweep.csv",
               ["t", "t_over_pi", "fidelity_qoc", "fidelity_adiabatic"],
               np.asarray(rows))
    return 0


def reported_fidelity_for_schedule(problem: ControlProblem,
                                   schedule: ControlSchedule) -> float:
    from .propagate import final_overlap
    return final_overlap(problem.psi0, schedule, problem.report_steps,
                         problem.psi_target)


def cmd_threshold(config: RunConfig, writer: _RunWriter, args) -> int:
    thr = config.raw.get("threshold", {})
    t_grid = [parse_time(t) for t in thr.get(
        "t_grid", ["1.75pi", "2.0pi", "2.25pi", "2.5pi", "2.75pi", "3.0pi",
                   "3.25pi", "3.5pi", "3.75pi", "4.0pi", "4.25pi", "4.5pi",
                   "4.75pi", "5.0pi", "5.25pi", "5.5pi"])]
    refine_to = thr.get("refine_to", "0.01pi")
    refine_to = parse_time(refine_to) if refine_to is not None else None
    problem = config.problem()
    result = threshold_time(config.constraints, problem, t_grid,
                            config.optimizer, refine_to=refine_to)
    payload = {
        "found": result.found,
        "threshold_fidelity": result.threshold_fidelity,
        "t_threshold": result.t_threshold,
        "t_threshold_over_pi":
            None if result.t_threshold is None else result.t_threshold / np.pi,
        "scan": [{"t": t, "t_over_pi": t / np.pi, "fidelity": f}
                 for t, f in result.scan_points],
    }
    if result.best_report is not None:
        payload["best_report"] = result.best_report.to_dict()
        payload["best_time"] = result.best_time
    if result.found:
        # speed-limit estimate from the trajectory actually evolved at T_th
        at_th = problem.with_time(result.t_threshold)
        schedule = at_th.schedule(result.best_report.best_params)
        traj = evolve(at_th.psi0, schedule, target=at_th.psi_target,
                      norm_tol=1e-6)
        est = estimate_qsl(at_th.psi0, at_th.psi_target, traj)
        payload["qsl"] = {"distance": est.distance,
                          "delta_e_ave": est.delta_e_ave,
                          "t_qsl": est.t_qsl,
                          "t_qsl_over_pi": est.t_qsl / np.pi}
    writer.json("threshold.json", payload)
    if not result.found:
        print("threshold fidelity not reached on the grid", file=sys.stderr)
        return 3
    schedule = problem.with_time(result.t_threshold).schedule(
        result.best_report.best_params)
    writer.csv("waveform.csv", ["t", "g", "j_hop"],
               waveform_table(schedule, 2001))
    return 0


def _load_pulse(args) -> tuple[dict, float]:
    if args.pulse is None:
        raise ConfigError("this subcommand requires --pulse <report.json>")
    data = json.loads(Path(args.pulse).read_text())
    report = data.get("report", data.get("best_report"))
    if report is None or "best_params" not in report:
        raise ConfigError("pulse file does not contain optimization results")
    t_total = data.get("best_time", data.get("total_time"))
    if t_total is None:
        raise ConfigError("pulse file does not record the evolution time")
    return report["best_params"], float(t_total)


def cmd_qsl(config: RunConfig, writer: _RunWriter, args) -> int:
    problem = config.problem()
    if args.pulse is not None:
        params_dict, t_total = _load_pulse(args)
        problem = problem.with_time(t_total)
        schedule = problem.schedule(params_from_dict(params_dict))
    else:
        ramp = RampSpec(config.initial.g, config.target.g,
                        config.initial.j_hop, config.target.j_hop,
                        problem.total_time)
        schedule = ControlSchedule(ramp=ramp, constraints=config.constraints)
    traj = evolve(problem.psi0, schedule, target=problem.psi_target,
                  norm_tol=1e-6)
    est = estimate_qsl(problem.psi0, problem.psi_target, traj)
    writer.csv("energy_fluctuation.csv",
               ["t", "g", "j_hop", "fidelity", "delta_e"],
               trajectory_table(traj))
    writer.json("qsl.json", {
        "total_time": problem.total_time,
        "total_time_over_pi": problem.total_time / np.pi,
        "distance": est.distance,
        "distance_over_pi": est.distance / np.pi,
        "delta_e_ave": est.delta_e_ave,
        "t_qsl": est.t_qsl,
        "t_qsl_over_pi": est.t_qsl / np.pi,
        "final_fidelity": float(traj.fidelity_vs_t[-1]),
    })
    return 0


def cmd_noise(config: RunConfig, writer: _RunWriter, args) -> int:
    params_dict, t_total = _load_pulse(args)
    problem = config.problem().with_time(t_total)
    noise_cfg = config.noise
    sigma_list = noise_cfg.get("sigma_list",
                               [0.0, 0.01, 0.02, 0.03, 0.04, 0.05])
    n_samples = int(noise_cfg.get("n_samples", 1000))
    grid_points = int(noise_cfg.get("grid_points", 100))
    points = noise_robustness(problem, params_from_dict(params_dict),
                              sigma_list, n_samples, seed=config.seed,
                              grid_points=grid_points, workers=config.workers)
    writer.csv("noise.csv",
               ["sigma", "mean_fidelity", "std_fidelity", "n_samples"],
               np.asarray([[p.sigma, p.mean_fidelity, p.std_fidelity,
                            p.n_samples] for p in points]))
    writer.json("noise.json", {
        "noise_grid_points": grid_points,
        "points": [{"sigma": p.sigma, "mean_fidelity": p.mean_fidelity,
                    "std_fidelity": p.std_fidelity, "n_samples": p.n_samples}
                   for p in points],
    })
    return 0


def cmd_lindblad(config: RunConfig, writer: _RunWriter, args) -> int:
    params_dict, t_total = _load_pulse(args)
    problem = config.problem().with_time(t_total)
    schedule = problem.schedule(params_from_dict(params_dict))
    closed = reported_fidelity_for_schedule(problem, schedule)
    sum_basis = build_sector_sum_basis(config.lattice)
    rho0 = DensityMatrix.from_state(sum_basis, problem.psi0)
    result = evolve_lindblad(rho0, schedule, config.decoherence, dt=config.dt,
                             target=problem.psi_target)
    writer.json("lindblad.json", {
        "rates": {"kappa": config.decoherence.kappa,
                  "gamma": config.decoherence.gamma,
                  "gamma_d": config.decoherence.gamma_d},
        "total_time": problem.total_time,
        "fidelity_closed": closed,
        "fidelity_open": result.fidelity,
        "fidelity_drop": closed - result.fidelity,
        "trace_drift_max": result.trace_drift_max,
    })
    return 0


_HANDLERS = {
    "ground": cmd_ground,
    "spdm-map": cmd_spdm_map,
    "adiabatic": cmd_adiabatic,
    "optimize": cmd_optimize,
    "sweep": cmd_sweep,
    "threshold": cmd_threshold,
    "qsl": cmd_qsl,
    "noise": cmd_noise,
    "lindblad": cmd_lindblad,
}


def run(subcommand: str, config_path: str | Path, *, seed: int | None = None,
        out: str | None = None, workers: int | None = None,
        dt: float | None = None, pulse: str | None = None) -> int:
    """Programmatic entry point mirroring the command line."""
    args = argparse.Namespace(pulse=pulse)
    config = RunConfig.load(config_path)
    config = _apply_overrides(config, seed=seed, out=out, workers=workers, dt=dt)
    writer = _RunWriter(config, subcommand)
    return _HANDLERS[subcommand](config, writer, args)


def _apply_overrides(config: RunConfig, *, seed, out, workers, dt) -> RunConfig:
    from dataclasses import replace as _replace
    if seed is not None:
        config.seed = int(seed)
        config.optimizer = _replace(config.optimizer, seed=int(seed))
    if out is not None:
        config.output_dir = Path(out)
    if workers is not None:
        config.workers = int(workers)
        config.optimizer = _replace(config.optimizer, workers=int(workers))
    if dt is not None:
        dt = float(dt)
        if not 0 < dt < config.total_time:
            raise ConfigError(f"dt={dt} must lie in (0, T={config.total_time})")
        config.dt = dt
    return config


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="jcqoc",
        description="Jaynes-Cummings lattice ground-state preparation "
                    "with optimized control pulses")
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", required=True, help="JSON config file")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--dt", type=float, default=None)
    parser.add_argument("--pulse", default=None,
                        help="saved optimization report (for qsl/noise/lindblad)")
    args = parser.parse_args(argv)
    try:
        return run(args.subcommand, args.config, seed=args.seed, out=args.out,
                   workers=args.workers, dt=args.dt, pulse=args.pulse)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (IntegrationAccuracyError, DegenerateGroundStateError) as exc:
        print(f"numerical accuracy failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
