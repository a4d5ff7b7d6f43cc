"""Time-dependent coupling schedules: linear ramps, CRAB modulation, noise.

A schedule evaluates ``t -> (g(t), J(t))`` (the detuning stays 0 throughout).
The modulated waveform is the linear ramp times ``1 + s(t) f(t)`` with a
truncated 8-harmonic Fourier series ``f`` and the envelope
``s(t) = 1 - cos(2 pi t / T)``, which pins the boundary values exactly.
Values are clipped to the constraint box, sign preserved; control noise
is added on top of the clipped waveform and is deliberately not re-clipped.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError

N_HARMONICS = 8

#: harmonic argument conventions: "literal" uses cos(w_k t / T) with
#: w_k = k + dw_k; "two_pi" inserts the conventional 2 pi factor so the
#: k-th harmonic completes about k full cycles over [0, T].
CONVENTIONS = ("literal", "two_pi")


@dataclass(frozen=True)
class RampSpec:
    """Boundary couplings and duration of the baseline linear ramp."""

    g_start: float
    g_end: float
    j_start: float
    j_end: float
    total_time: float

    def __post_init__(self):
        if not self.total_time > 0:
            raise ConfigError(f"total_time must be > 0, got {self.total_time}")


@dataclass(frozen=True)
class CrabParams:
    """The 48 pulse parameters: Fourier coefficients and frequency offsets.

    ``c1/c2`` are the cos/sin coefficients of the g-modulation, ``d1/d2``
    of the J-modulation, ``dw1/dw2`` the per-harmonic frequency offsets.
    """

    c1: np.ndarray
    c2: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    dw1: np.ndarray
    dw2: np.ndarray

    def __post_init__(self):
        for name in ("c1", "c2", "d1", "d2", "dw1", "dw2"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            if arr.shape != (N_HARMONICS,):
                raise ConfigError(
                    f"{name} must hold exactly {N_HARMONICS} harmonics, "
                    f"got shape {arr.shape}")
            if not np.all(np.isfinite(arr)):
                raise ConfigError(f"{name} contains non-finite values")
            object.__setattr__(self, name, arr)

    @classmethod
    def zeros(cls) -> "CrabParams":
        z = np.zeros(N_HARMONICS)
        return cls(z, z, z, z, z, z)

    @classmethod
    def from_vector(cls, vec: np.ndarray) -> "CrabParams":
        vec = np.asarray(vec, dtype=np.float64)
        if vec.shape != (6 * N_HARMONICS,):
            raise ConfigError(f"parameter vector must have length {6 * N_HARMONICS}")
        parts = vec.reshape(6, N_HARMONICS)
        return cls(*parts)

    def to_vector(self) -> np.ndarray:
        return np.concatenate(
            [self.c1, self.c2, self.d1, self.d2, self.dw1, self.dw2])


@dataclass(frozen=True)
class Constraints:
    """Hard bounds |g(t)| <= g_max, |J(t)| <= j_max."""

    g_max: float
    j_max: float

    def __post_init__(self):
        if not (self.g_max > 0 and self.j_max > 0):
            raise ConfigError("constraint bounds must be positive")


@dataclass(frozen=True)
class NoiseSpec:
    """Gaussian control-error model: std ``sigma`` on a piecewise-constant grid."""

    sigma: float
    grid_points: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.sigma < 0:
            raise ConfigError(f"sigma must be >= 0, got {self.sigma}")
        if self.grid_points < 1:
            raise ConfigError("grid_points must be >= 1")


def _check_time(t, total_time: float):
    t = np.asarray(t, dtype=np.float64)
    if np.any(t < 0.0) or np.any(t > total_time):
        raise ConfigError(f"time outside [0, {total_time}]")
    return t


def ramp_eval(spec: RampSpec, t):
    """Baseline linear ramp (g0(t), J0(t)); accepts scalars or arrays.

    Written as a convex combination so the boundary values are exact in
    floating point, not just up to rounding.
    """
    t = _check_time(t, spec.total_time)
    x = t / spec.total_time
    return (spec.g_start * (1.0 - x) + spec.g_end * x,
            spec.j_start * (1.0 - x) + spec.j_end * x)


def envelope_s(t, total_time: float):
    """Boundary-pinning envelope s(t) = 1 - cos(2 pi t / T), range [0, 2]."""
    t = _check_time(t, total_time)
    return 1.0 - np.cos(2.0 * np.pi * t / total_time)


def _modulation(t, total_time, cos_coeff, sin_coeff, offsets, convention):
    x = np.asarray(t, dtype=np.float64) / total_time
    omega = np.arange(1, N_HARMONICS + 1) + offsets
    if convention == "two_pi":
        omega = 2.0 * np.pi * omega
    phase = np.multiply.outer(x, omega)
    return np.cos(phase) @ cos_coeff + np.sin(phase) @ sin_coeff


def crab_eval(spec: RampSpec, params: CrabParams, constraints: Constraints,
              t, convention: str = "literal"):
    """Modulated, clipped couplings (g(t), J(t)); accepts scalars or arrays."""
    if convention not in CONVENTIONS:
        raise ConfigError(f"convention must be one of {CONVENTIONS}")
    t = _check_time(t, spec.total_time)
    g0, j0 = ramp_eval(spec, t)
    s = envelope_s(t, spec.total_time)
    f1 = _modulation(t, spec.total_time, params.c1, params.c2, params.dw1,
                     convention)
    f2 = _modulation(t, spec.total_time, params.d1, params.d2, params.dw2,
                     convention)
    g = g0 * (1.0 + s * f1)
    j = j0 * (1.0 + s * f2)
    g = np.clip(g, -constraints.g_max, constraints.g_max)
    j = np.clip(j, -constraints.j_max, constraints.j_max)
    return g, j


@dataclass(frozen=True, eq=False)
class ControlSchedule:
    """Evaluator for the full control waveform on [0, T].

    With ``params=None`` this is the bare adiabatic ramp.  ``noise_g`` /
    ``noise_j`` hold per-grid-node additive offsets (piecewise-constant in
    time) produced by :func:`apply_noise`.
    """

    ramp: RampSpec
    params: CrabParams | None = None
    constraints: Constraints | None = None
    convention: str = "literal"
    noise_g: np.ndarray | None = None
    noise_j: np.ndarray | None = None

    def __post_init__(self):
        if self.convention not in CONVENTIONS:
            raise ConfigError(f"convention must be one of {CONVENTIONS}")
        if self.constraints is not None:
            c = self.constraints
            for name, val in (("g_start", self.ramp.g_start),
                              ("g_end", self.ramp.g_end)):
                if abs(val) > c.g_max:
                    raise ConfigError(
                        f"{name}={val} exceeds the constraint g_max={c.g_max}")
            for name, val in (("j_start", self.ramp.j_start),
                              ("j_end", self.ramp.j_end)):
                if abs(val) > c.j_max:
                    raise ConfigError(
                        f"{name}={val} exceeds the constraint j_max={c.j_max}")
        if (self.noise_g is None) != (self.noise_j is None):
            raise ConfigError("noise offsets must be set for both g and J")

    @property
    def total_time(self) -> float:
        return self.ramp.total_time

    @property
    def delta(self) -> float:
        """Detuning is held at zero for the whole protocol."""
        return 0.0

    def _clean_values(self, t):
        if self.params is None:
            g, j = ramp_eval(self.ramp, t)
            if self.constraints is not None:
                g = np.clip(g, -self.constraints.g_max, self.constraints.g_max)
                j = np.clip(j, -self.constraints.j_max, self.constraints.j_max)
            return g, j
        if self.constraints is None:
            raise ConfigError("modulated schedules require constraints")
        return crab_eval(self.ramp, self.params, self.constraints, t,
                         self.convention)

    def values(self, t):
        """Couplings (g(t), J(t)) including modulation, clipping and noise."""
        g, j = self._clean_values(t)
        if self.noise_g is not None:
            idx = self._noise_index(t)
            g = g + self.noise_g[idx]
            j = j + self.noise_j[idx]
        return g, j

    def _noise_index(self, t):
        n = len(self.noise_g)
        idx = np.floor(np.asarray(t, dtype=np.float64) / self.total_time * n)
        return np.clip(idx.astype(np.int64), 0, n - 1)

    def stage_values(self, n_steps: int):
        """Per-step coupling triples (start, midpoint, end) for the integrator.

        Shape (n_steps, 3).  The noise offset of a step is the one holding
        at its midpoint, which keeps all three stage values inside the same
        noise interval whenever the grid aligns with step boundaries; the
        integrator then sees the exact piecewise dynamics.
        """
        t = np.linspace(0.0, self.total_time, 2 * n_steps + 1)
        g, j = self._clean_values(t)
        g_st = np.stack([g[0:-1:2], g[1::2], g[2::2]], axis=1)
        j_st = np.stack([j[0:-1:2], j[1::2], j[2::2]], axis=1)
        if self.noise_g is not None:
            idx = self._noise_index(t[1::2])
            g_st = g_st + self.noise_g[idx][:, None]
            j_st = j_st + self.noise_j[idx][:, None]
        return (np.ascontiguousarray(g_st, dtype=np.float64),
                np.ascontiguousarray(j_st, dtype=np.float64))


def apply_noise(schedule: ControlSchedule, noise: NoiseSpec) -> ControlSchedule:
    """Add one Gaussian control-error realization to a schedule.

    Offsets are drawn once per grid node and held constant in between;
    the same seed always yields the same realization.  ``sigma=0`` returns
    the schedule unchanged.
    """
    if noise.sigma == 0.0:
        return schedule
    rng = np.random.default_rng(noise.seed)
    draws = rng.standard_normal((2, noise.grid_points))
    return replace(schedule, noise_g=noise.sigma * draws[0],
                   noise_j=noise.sigma * draws[1])


def waveform_table(schedule: ControlSchedule, n_points: int = 1001) -> np.ndarray:
    """Sampled waveform as columns (t, g, J) for export/plotting."""
    t = np.linspace(0.0, schedule.total_time, n_points)
    g, j = schedule.values(t)
    return np.column_stack([t, g, j])
