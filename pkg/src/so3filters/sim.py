"""Ground-truth kinematics, sensor synthesis and filter experiments.

The truth is propagated with the group-exact stepper at ``truth_rate`` Hz.
Sensors sample it at ``sensor_rate`` Hz (which must divide the truth rate):
a gyro with additive white noise and body-frame observations of known
inertial directions, perturbed and re-normalized.  Each configured filter
consumes the same sensor frames; the recorded metric is the true error
distance ``|R R_hat^T|_I``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError
from .filters import FilterConfig, FilterKind, FilterState, VectorObservation, filter_step
from .rng import GaussianStream
from .so3 import _t, dist_I, ensure_rotation, exp_so3, rot_angle_axis

_SQ3 = 1.0 / math.sqrt(3.0)
IDENTITY = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))


def omega_profile(name: str):
    """Angular-velocity profile ``t -> omega(t)`` (vectorized over ``t``).

    ``"paper"``: ``(sin 0.3t, 0.7 sin(0.2t + pi), 0.5 sin(0.1t + pi/3))``;
    ``"zero"``; ``"constant:x,y,z"``.
    """
    if name == "paper":
        def fn(t):
            t = np.asarray(t, dtype=float)
            return np.stack(
                [np.sin(0.3 * t), 0.7 * np.sin(0.2 * t + math.pi), 0.5 * np.sin(0.1 * t + math.pi / 3.0)], axis=-1
            )
        return fn
    if name == "zero":
        return lambda t: np.zeros(np.shape(t) + (3,))
    if name.startswith("constant:"):
        try:
            w = np.array([float(v) for v in name.split(":", 1)[1].split(",")])
        except ValueError as exc:
            raise InvalidArgumentError(f"bad constant profile {name!r}") from exc
        if w.shape != (3,):
            raise InvalidArgumentError(f"constant profile needs three components, got {name!r}")
        return lambda t: np.broadcast_to(w, np.shape(t) + (3,)).copy()
    raise InvalidArgumentError(f"unknown angular velocity profile {name!r}")


@dataclass(frozen=True)
class TruthConfig:
    profile: str = "paper"
    R0: tuple = IDENTITY
    truth_rate: float = 1000.0

    def __post_init__(self):
        omega_profile(self.profile)
        if not self.truth_rate > 0:
            raise InvalidArgumentError(f"truth_rate must be positive, got {self.truth_rate}")


@dataclass(frozen=True)
class SensorConfig:
    sensor_rate: float = 200.0
    gyro_noise_std: float = 0.1
    vec_noise_std: float = 0.1
    r1: tuple = (_SQ3, -_SQ3, _SQ3)
    r2: tuple = (0.0, 0.0, 1.0)
    rho1: float = 1.0
    rho2: float = 2.0
    seed: int = 0

    def __post_init__(self):
        if self.gyro_noise_std < 0 or self.vec_noise_std < 0:
            raise InvalidArgumentError("noise standard deviations must be non-negative")
        if not self.sensor_rate > 0:
            raise InvalidArgumentError(f"sensor_rate must be positive, got {self.sensor_rate}")
        if self.rho1 <= 0 or self.rho2 <= 0:
            raise InvalidArgumentError("vector weights must be positive")

    def references(self) -> np.ndarray:
        r = np.array([self.r1, self.r2], dtype=float)
        return r / np.linalg.norm(r, axis=1, keepdims=True)

    def weights(self) -> np.ndarray:
        return np.array([self.rho1, self.rho2], dtype=float)


@dataclass(frozen=True)
class ExperimentConfig:
    truth: TruthConfig = field(default_factory=TruthConfig)
    sensor: SensorConfig = field(default_factory=SensorConfig)
    filters: tuple = (FilterKind.I, FilterKind.II, FilterKind.III)
    rhat0_angle: float = math.pi - 0.1
    rhat0_axis: tuple = (1.0, 0.0, 0.0)
    horizon: float = 60.0
    epsilon: float = 1e-2
    output: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "filters", tuple(FilterKind(k) for k in self.filters))
        if not self.filters:
            raise InvalidArgumentError("at least one filter is required")
        if len(set(self.filters)) != len(self.filters):
            raise InvalidArgumentError("filter kinds must be distinct")
        if not self.horizon > 0:
            raise InvalidArgumentError(f"horizon must be positive, got {self.horizon}")
        steps_per_tick(self.truth.truth_rate, self.sensor.sensor_rate)

    def rhat0(self) -> np.ndarray:
        u = np.asarray(self.rhat0_axis, dtype=float)
        return rot_angle_axis(self.rhat0_angle, u / np.linalg.norm(u))

    def filter_configs(self) -> list[FilterConfig]:
        r, rho = self.sensor.references(), self.sensor.weights()
        return [FilterConfig.from_vectors(k, r, rho, self.epsilon) for k in self.filters]


def paper_preset(**overrides) -> ExperimentConfig:
    """The reference experiment (all defaults), optionally with top-level overrides."""
    return ExperimentConfig(**overrides)


def steps_per_tick(truth_rate: float, sensor_rate: float) -> int:
    ratio = truth_rate / sensor_rate
    n = int(round(ratio))
    if n < 1 or abs(ratio - n) > 1e-9 * ratio:
        raise InvalidArgumentError(
            f"truth rate {truth_rate} Hz must be an integer multiple of sensor rate {sensor_rate} Hz"
        )
    return n


@dataclass
class TruthSeries:
    t: np.ndarray  # (N,)
    R: np.ndarray  # (N, 3, 3)
    omega: np.ndarray  # (N, 3) body rate at each sample


def propagate_truth(cfg: TruthConfig, horizon: float, record_every: int = 1) -> TruthSeries:
    """Integrate ``dR/dt = R [omega]x`` with ``R_{k+1} = R_k exp(omega(t_k) dt)``.

    ``record_every`` thins the stored samples (the final sample is always kept).
    """
    dt = 1.0 / cfg.truth_rate
    n = int(round(horizon * cfg.truth_rate))
    t = np.arange(n + 1) * dt
    omega = omega_profile(cfg.profile)(t)
    steps = exp_so3(omega[:-1] * dt)
    keep = [k for k in range(0, n + 1, record_every)]
    if keep[-1] != n:
        keep.append(n)
    Rs = np.empty((len(keep), 3, 3))
    R = np.array(cfg.R0, dtype=float)
    j = 0
    for k in range(n + 1):
        if k == keep[j]:
            Rs[j] = R
            j += 1
        if k == n:
            break
        R = R @ steps[k]
        if k % 100 == 99:
            R = ensure_rotation(R)
    idx = np.array(keep)
    return TruthSeries(t[idx], Rs, omega[idx])


@dataclass
class SensorFrames:
    t: np.ndarray  # (M,)
    omega_y: np.ndarray  # (M, 3)
    b: np.ndarray  # (M, n, 3) body-frame measurements
    r: np.ndarray  # (n, 3) inertial references
    rho: np.ndarray  # (n,)
    R_true: np.ndarray  # (M, 3, 3)


def synthesize_sensors(truth: TruthSeries, cfg: SensorConfig, truth_rate: float) -> SensorFrames:
    """Sample gyro and vector sensors on every sensor tick of ``truth``.

    Noise is drawn from one seeded stream: first all gyro samples
    (tick-major, then axis), then all vector samples (tick, vector, axis).
    Noisy vectors are re-normalized; with zero vector noise they are left
    exactly equal to ``R^T r_i``.
    """
    stride = steps_per_tick(truth_rate, cfg.sensor_rate)
    idx = np.arange(0, truth.t.shape[0], stride)
    R = truth.R[idx]
    r = cfg.references()
    m = idx.shape[0]
    stream = GaussianStream(cfg.seed)
    gyro_noise = stream.normal((m, 3), cfg.gyro_noise_std)
    vec_noise = stream.normal((m, r.shape[0], 3), cfg.vec_noise_std)
    b = np.einsum("nj,mjk->mnk", r, R)  # rows R^T r_i
    if cfg.vec_noise_std > 0:
        b = b + vec_noise
        b = b / np.linalg.norm(b, axis=-1, keepdims=True)
    omega_y = truth.omega[idx] + (gyro_noise if cfg.gyro_noise_std > 0 else 0.0)
    return SensorFrames(truth.t[idx], omega_y, b, r, cfg.weights(), R)


@dataclass
class TrajectoryRecord:
    t: np.ndarray  # (N,)
    kinds: tuple  # filter kinds, column order
    dist: np.ndarray  # (N, F) true error distance
    sigma: np.ndarray  # (N, F, 3) innovation used at each sample
    R_hat: np.ndarray | None = None  # (N, F, 3, 3)

    @property
    def angle_deg(self) -> np.ndarray:
        return np.degrees(2.0 * np.arcsin(np.clip(self.dist, 0.0, 1.0)))

    def column(self, kind) -> int:
        return self.kinds.index(FilterKind(kind))

    def crossing_time(self, kind, level: float) -> float:
        """First recorded time the error of ``kind`` drops below ``level`` (``inf`` if never)."""
        d = self.dist[:, self.column(kind)]
        hit = np.nonzero(d < level)[0]
        return float(self.t[hit[0]]) if hit.size else math.inf

    @classmethod
    def empty(cls, kinds) -> "TrajectoryRecord":
        kinds = tuple(FilterKind(k) for k in kinds)
        f = len(kinds)
        return cls(np.zeros(0), kinds, np.zeros((0, f)), np.zeros((0, f, 3)))


def run_experiment(cfg: ExperimentConfig, measurement: str = "vector", write: bool = True,
                   keep_estimates: bool = False) -> TrajectoryRecord:
    """Run every configured filter on the same synthesized sensor stream.

    Args:
        cfg: experiment description.
        measurement: ``"vector"`` feeds body-vector observations to the filters,
            ``"matrix"`` feeds the true attitude as a reconstructed measurement.
        write: write the CSV to ``cfg.output`` when it is set.
        keep_estimates: also store every estimate ``R_hat``.
    """
    if measurement not in ("vector", "matrix"):
        raise InvalidArgumentError(f"measurement must be 'vector' or 'matrix', got {measurement!r}")
    truth = propagate_truth(cfg.truth, cfg.horizon)
    frames = synthesize_sensors(truth, cfg.sensor, cfg.truth.truth_rate)
    configs = cfg.filter_configs()
    dt = 1.0 / cfg.sensor.sensor_rate
    m, nf = frames.t.shape[0], len(configs)
    dist = np.empty((m, nf))
    sigma = np.empty((m, nf, 3))
    R_hats = np.empty((m, nf, 3, 3)) if keep_estimates else None
    R0hat = cfg.rhat0()
    base_obs = VectorObservation(frames.r, frames.b[0], frames.rho)
    for j, fc in enumerate(configs):
        state = FilterState(R0hat)
        for k in range(m):
            R_hat = state.R_hat
            dist[k, j] = dist_I(frames.R_true[k] @ _t(R_hat))
            if keep_estimates:
                R_hats[k, j] = R_hat
            if measurement == "vector":
                meas = base_obs.with_b(frames.b[k])
            else:
                meas = frames.R_true[k]
            state = filter_step(fc, state, frames.omega_y[k], meas, dt)
            sigma[k, j] = state.sigma
    record = TrajectoryRecord(frames.t, cfg.filters, dist, sigma, R_hats)
    if write and cfg.output:
        from .fileio import write_csv

        write_csv(record, cfg.output)
    return record


__all__ = [
    "ExperimentConfig",
    "SensorConfig",
    "SensorFrames",
    "TrajectoryRecord",
    "TruthConfig",
    "TruthSeries",
    "omega_profile",
    "paper_preset",
    "propagate_truth",
    "run_experiment",
    "steps_per_tick",
    "synthesize_sensors",
]
