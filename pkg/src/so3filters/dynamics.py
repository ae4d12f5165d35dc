"""Reference integrator for the closed-loop attitude-error dynamics.

With ``R~ = R R_hat^T`` the filters produce

    dR~/dt = R~ [sigma(R~_y) - d]x,      R~_y = N_R R~,

where ``d = R_hat n_omega`` is the gyro disturbance seen in the inertial
frame and ``N_R`` a perturbation of the attitude measurement.  The error
system is integrated directly on SO(3) with exponential steps, so every
sample stays a rotation; batches of independent trials run in lock-step.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InvalidArgumentError
from .filters import FilterKind, sigma_from_error
from .so3 import E3, cross, dist_I, dist_sq, ensure_rotation, exp_so3, psi, rodrigues_of

Disturbance = Callable[[int, float, np.ndarray], np.ndarray]
AttitudeNoiseFn = Callable[[int, float], np.ndarray]


@dataclass
class ErrorTrajectory:
    t: np.ndarray  # (N,)
    R: np.ndarray  # (N, ..., 3, 3)
    sigma: np.ndarray  # (N, ..., 3) innovation at the start of each step
    disturbance: np.ndarray  # (N, ..., 3) inertial-frame gyro disturbance held over each step

    @property
    def dist(self) -> np.ndarray:
        return dist_I(self.R)

    @property
    def Z(self) -> np.ndarray:
        return rodrigues_of(self.R)


def perturb_along_axis(Rt: np.ndarray, n_theta) -> np.ndarray:
    """``R_a(n_theta, u) R~`` with ``u`` the axis of ``R~`` (``e3`` when ``R~ ~ I``)."""
    p = psi(Rt)
    s = np.linalg.norm(p, axis=-1, keepdims=True)
    ok = s > 1e-12
    u = np.where(ok, p / np.where(ok, s, 1.0), E3)
    return exp_so3(np.asarray(n_theta, dtype=float)[..., None] * u) @ Rt


def _dexpinv(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    # right-trivialized inverse differential of exp, truncated after the
    # second commutator (enough for fourth order)
    uv = cross(u, v)
    return v + 0.5 * uv + cross(u, uv) / 12.0


def integrate_error(
    kind,
    A: np.ndarray,
    epsilon: float,
    R0: np.ndarray,
    horizon: float,
    dt: float,
    *,
    disturbance: Disturbance | None = None,
    attitude_noise: AttitudeNoiseFn | None = None,
    method: str = "rkmk4",
    record_every: int = 1,
) -> ErrorTrajectory:
    """Integrate the error dynamics of filter ``kind`` from ``R0``.

    Args:
        kind: filter kind (``"I"``, ``"II"``, ``"III"``).
        A: weighting matrix, ``(3, 3)`` or batched like ``R0``.
        epsilon: gain parameter (``0`` allowed where the gain stays finite).
        R0: initial error rotation(s), ``(..., 3, 3)``.
        horizon: final time.
        dt: step size.
        disturbance: ``f(k, t, R~) -> d`` inertial-frame gyro disturbance for step ``k``.
        attitude_noise: ``f(k, t) -> n_theta`` measurement perturbation angle.
        method: ``"rkmk4"`` (4th-order Munthe-Kaas) or ``"euler"`` (exponential Euler,
            the scheme the filters use online).
        record_every: keep every ``record_every``-th sample (the last is always kept).
    """
    kind = FilterKind(kind)
    if method not in ("rkmk4", "euler"):
        raise InvalidArgumentError(f"unknown method {method!r}")
    if not dt > 0.0 or not horizon >= 0.0:
        raise InvalidArgumentError("dt must be positive and horizon non-negative")
    n_steps = int(round(horizon / dt))
    R = np.array(R0, dtype=float)
    A = np.asarray(A, dtype=float)
    batch = R.shape[:-2]
    zero = np.zeros(batch + (3,))

    def field(Rt, d, n_theta):
        Ry = Rt if n_theta is None else perturb_along_axis(Rt, n_theta)
        if kind is FilterKind.I:
            sig = -psi(A @ Ry)
        else:
            sig = sigma_from_error(kind, A, epsilon, Ry)
        return sig - d, sig

    ts, Rs, sigmas, ds = [], [], [], []
    for k in range(n_steps + 1):
        t = k * dt
        d = zero if disturbance is None else np.broadcast_to(np.asarray(disturbance(k, t, R), dtype=float), batch + (3,))
        n_theta = None if attitude_noise is None else attitude_noise(k, t)
        xi1, sig = field(R, d, n_theta)
        if k % record_every == 0 or k == n_steps:
            ts.append(t)
            Rs.append(R)
            sigmas.append(sig)
            ds.append(d)
        if k == n_steps:
            break
        if method == "euler":
            u = dt * xi1
        else:
            k1 = xi1
            u2 = 0.5 * dt * k1
            k2 = _dexpinv(u2, field(R @ exp_so3(u2), d, n_theta)[0])
            u3 = 0.5 * dt * k2
            k3 = _dexpinv(u3, field(R @ exp_so3(u3), d, n_theta)[0])
            u4 = dt * k3
            k4 = _dexpinv(u4, field(R @ exp_so3(u4), d, n_theta)[0])
            u = dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        R = R @ exp_so3(u)
        if k % 64 == 63:
            R = ensure_rotation(R)
    return ErrorTrajectory(np.array(ts), np.array(Rs), np.array(sigmas), np.array(ds))


def first_crossing_time(t: np.ndarray, values: np.ndarray, level: float) -> np.ndarray:
    """First time each trace (last axis = trial) drops to ``level``, linearly interpolated.

    Traces that never reach the level give ``inf``.
    """
    values = np.asarray(values, dtype=float)
    below = values <= level
    out = np.full(values.shape[1:], np.inf)
    flat_v = values.reshape(values.shape[0], -1)
    flat_b = below.reshape(below.shape[0], -1)
    res = out.reshape(-1)
    for j in range(flat_v.shape[1]):
        idx = np.argmax(flat_b[:, j])
        if not flat_b[idx, j]:
            continue
        if idx == 0:
            res[j] = t[0]
            continue
        v0, v1 = flat_v[idx - 1, j], flat_v[idx, j]
        res[j] = t[idx - 1] + (t[idx] - t[idx - 1]) * (v0 - level) / (v0 - v1)
    return res.reshape(values.shape[1:])


__all__ = ["ErrorTrajectory", "integrate_error", "first_crossing_time", "perturb_along_axis", "dist_sq"]
