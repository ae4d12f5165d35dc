"""Error dynamics under gyro disturbances and attitude-measurement noise.

In Rodrigues coordinates ``Z = Z(R~)`` the three filters obey

    dZ/dt = -k_i(Z) Abar Z - g(Z) d,      g(Z) = (I + [Z]x + Z Z^T) / 2,

with ``d = R_hat n_omega`` the gyro disturbance rotated to the inertial frame.
This module provides that right-hand side, a disturbance that destabilizes
Filter I, explicit local input-to-state stability margins, the attitude-noise
model and a numerical check of the H-infinity type attenuation inequality.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InvalidArgumentError
from .filters import FilterKind, gain_k_rodrigues
from .so3 import _t, cross, dist_I, rot_angle_axis, rotation_axis

NOISE_WARN_RAD = 0.2


@dataclass(frozen=True)
class GyroDisturbance:
    """Bounded gyro disturbance ``t -> n_omega(t)`` with declared sup norm."""

    fn: Callable[[float], np.ndarray]
    sup_norm: float

    def __call__(self, t: float) -> np.ndarray:
        n = np.asarray(self.fn(t), dtype=float)
        norm = float(np.linalg.norm(n))
        if norm > self.sup_norm * (1.0 + 1e-12):
            raise InvalidArgumentError(f"disturbance norm {norm:.6g} exceeds declared bound {self.sup_norm:.6g} at t = {t}")
        return n


@dataclass(frozen=True)
class AttitudeNoise:
    """Small rotation angle ``t -> n_theta(t)`` applied about the current error axis."""

    fn: Callable[[float], float]

    def __call__(self, t: float) -> float:
        n = float(self.fn(t))
        if abs(n) > NOISE_WARN_RAD:
            warnings.warn(f"attitude noise {n:.3g} rad is outside the small-angle regime", stacklevel=2)
        return n


def g_matrix(Z: np.ndarray) -> np.ndarray:
    """``(I + [Z]x + Z Z^T) / 2``, the Rodrigues-vector kinematic map."""
    Z = np.asarray(Z, dtype=float)
    G = 0.5 * (Z[..., :, None] * Z[..., None, :])
    G[..., 0, 0] += 0.5
    G[..., 1, 1] += 0.5
    G[..., 2, 2] += 0.5
    G[..., 0, 1] -= 0.5 * Z[..., 2]
    G[..., 1, 0] += 0.5 * Z[..., 2]
    G[..., 0, 2] += 0.5 * Z[..., 1]
    G[..., 2, 0] -= 0.5 * Z[..., 1]
    G[..., 1, 2] -= 0.5 * Z[..., 0]
    G[..., 2, 1] += 0.5 * Z[..., 0]
    return G


def rodrigues_error_rhs(kind, Z, Abar, epsilon: float, Rhat_nw) -> np.ndarray:
    """``dZ/dt = -k(Z) Abar Z - g(Z) R_hat n_omega``."""
    Z = np.asarray(Z, dtype=float)
    d = np.asarray(Rhat_nw, dtype=float)
    k = np.asarray(gain_k_rodrigues(kind, np.einsum("...i,...i->...", Z, Z), epsilon))
    AZ = np.einsum("...ij,...j->...i", np.asarray(Abar, dtype=float), Z)
    # g(Z) d = (d + Z x d + Z (Z.d)) / 2
    gd = 0.5 * (d + cross(Z, d) + Z * np.einsum("...i,...i->...", Z, d)[..., None])
    return -k[..., None] * AZ - gd


def prop1_disturbance(Z0, lambda_i: float, t, abar=None) -> np.ndarray:
    """Inertial-frame disturbance ``-2 lambda Z0 / sqrt(2 lambda t + 1)``.

    Driving Filter I with it from ``Z(0) = Z0`` (a unit eigenvector of ``Abar``
    for ``lambda``) keeps the direction of ``Z`` fixed while its norm grows as
    ``sqrt(2 lambda t + 1)``: the error drifts to a half turn although the
    disturbance vanishes.

    Raises:
        InvalidArgumentError: if ``Z0`` is not unit, or (when ``abar`` is given)
            not an eigenvector of ``abar`` for ``lambda_i``.
    """
    Z0 = np.asarray(Z0, dtype=float)
    if abs(np.linalg.norm(Z0) - 1.0) > 1e-9:
        raise InvalidArgumentError(f"Z0 must be a unit vector, got norm {np.linalg.norm(Z0):.12g}")
    if not lambda_i > 0.0:
        raise InvalidArgumentError(f"eigenvalue must be positive, got {lambda_i}")
    if abar is not None and np.linalg.norm(np.asarray(abar) @ Z0 - lambda_i * Z0) > 1e-9:
        raise InvalidArgumentError("Z0 is not an eigenvector of Abar for the given eigenvalue")
    t = np.asarray(t, dtype=float)
    scale = -2.0 * lambda_i / np.sqrt(2.0 * lambda_i * t + 1.0)
    return scale[..., None] * Z0


def prop1_norm(lambda_i: float, t):
    """Closed-form ``||Z(t)||`` under :func:`prop1_disturbance`."""
    return np.sqrt(2.0 * lambda_i * np.asarray(t, dtype=float) + 1.0)


@dataclass(frozen=True)
class IssBounds:
    """Local ISS margins on ``sup ||n_omega||`` for the three filters on ``||Z|| <= r``."""

    k_u1: float
    k_u2: float
    k_u3: float
    r: float
    rho_frac: float
    lmin: float
    epsilon: float

    def k_u(self, kind) -> float:
        return {FilterKind.I: self.k_u1, FilterKind.II: self.k_u2, FilterKind.III: self.k_u3}[FilterKind(kind)]

    def varsigma(self, kind) -> float:
        kind = FilterKind(kind)
        r2, eps = self.r * self.r, self.epsilon
        if kind is FilterKind.I:
            return 1.0 + r2
        if kind is FilterKind.II:
            return math.sqrt((1.0 + r2) * (1.0 + eps + eps * r2))
        return 1.0 + eps + eps * r2

    def gamma(self, kind, s):
        """Asymptotic gain: ultimate bound on ``||Z||`` for disturbances of size ``s``."""
        return self.varsigma(kind) * np.asarray(s, dtype=float) / (2.0 * self.rho_frac * self.lmin)

    def proof_gain(self, kind, s):
        """The same gain written as ``(1 + r^2) s / (2 k_i(r) rho lmin)``."""
        k = gain_k_rodrigues(kind, self.r * self.r, self.epsilon)
        return (1.0 + self.r * self.r) * np.asarray(s, dtype=float) / (2.0 * k * self.rho_frac * self.lmin)


def iss_bounds(r: float, rho_frac: float, lmin: float, epsilon: float) -> IssBounds:
    """Largest disturbance levels for which each filter is ISS on ``||Z|| <= r``."""
    if not r > 0.0:
        raise InvalidArgumentError(f"r must be positive, got {r}")
    if not 0.0 < rho_frac < 1.0:
        raise InvalidArgumentError(f"rho_frac must lie in (0, 1), got {rho_frac}")
    if not lmin > 0.0:
        raise InvalidArgumentError(f"lmin must be positive, got {lmin}")
    if not epsilon > 0.0:
        raise InvalidArgumentError(f"epsilon must be positive, got {epsilon}")
    r2 = r * r
    c = rho_frac * lmin * r
    q = 1.0 + epsilon + epsilon * r2
    return IssBounds(
        k_u1=c / (1.0 + r2),
        k_u2=c / math.sqrt((1.0 + r2) * q),
        k_u3=c / q,
        r=r,
        rho_frac=rho_frac,
        lmin=lmin,
        epsilon=epsilon,
    )


def apply_attitude_noise(R_true: np.ndarray, R_hat: np.ndarray, n_theta: float) -> np.ndarray:
    """Measured attitude ``N_R R`` with ``N_R`` a rotation by ``n_theta`` about the error axis.

    Raises:
        AxisUndefinedError: if the error ``R R_hat^T`` is (close to) the
            identity or a half turn.
    """
    R_true = np.asarray(R_true, dtype=float)
    if n_theta == 0.0:
        return R_true.copy()
    u = rotation_axis(R_true @ _t(np.asarray(R_hat, dtype=float)))
    return rot_angle_axis(n_theta, u) @ R_true


@dataclass(frozen=True)
class AttenuationResult:
    lhs: float
    rhs: float
    holds: bool
    applicable: bool
    max_dist: float


def attenuation_check(t, Z, n_omega, a: float, gamma: float, max_dist_allowed: float = 0.999) -> AttenuationResult:
    """Check ``(4a - 1/gamma^2) int |Z|^2 <= gamma^2 int |n|^2 + 2 ln(1 + |Z(0)|^2)``.

    Integrals use the composite trapezoid rule on the given samples.  The
    trajectory should come from Filter III with ``A = a I`` and ``epsilon = 0``;
    if it approaches a half turn (``|R~|_I > max_dist_allowed``) the result is
    flagged not applicable instead of returning a verdict.

    Raises:
        InvalidArgumentError: if ``gamma^2 <= 1 / (2 a)``.
    """
    if not a > 0.0 or not gamma * gamma > 1.0 / (2.0 * a):
        raise InvalidArgumentError(f"need gamma^2 > 1/(2a), got gamma = {gamma}, a = {a}")
    t = np.asarray(t, dtype=float)
    Z = np.asarray(Z, dtype=float)
    n = np.asarray(n_omega, dtype=float)
    z2 = np.einsum("k...i,k...i->k...", Z, Z)
    # |R~|_I^2 = |Z|^2 / (1 + |Z|^2)
    max_dist = float(np.sqrt(np.max(z2 / (1.0 + z2)))) if z2.size else 0.0
    lhs = (4.0 * a - 1.0 / gamma**2) * float(np.sum(np.trapezoid(z2, t, axis=0)))
    rhs = gamma**2 * float(np.sum(np.trapezoid(np.einsum("k...i,k...i->k...", n, n), t, axis=0)))
    rhs += 2.0 * float(np.sum(np.log1p(z2[0]))) if z2.size else 0.0
    applicable = max_dist <= max_dist_allowed
    holds = applicable and lhs <= rhs + 1e-9 * rhs
    return AttenuationResult(lhs, rhs, holds, applicable, max_dist)


def lyapunov_step_violations(Z: np.ndarray, threshold: float, r: float) -> tuple[int, int]:
    """Count steps where ``V = |Z|^2 / 2`` increases although ``threshold <= |Z_k| <= r``.

    ``Z`` has time on the first axis.  Returns ``(violations, steps_tested)``.
    """
    Z = np.asarray(Z, dtype=float)
    nz = np.linalg.norm(Z, axis=-1)
    V = 0.5 * nz * nz
    dV = V[1:] - V[:-1]
    active = (nz[:-1] >= threshold) & (nz[:-1] <= r)
    return int(np.count_nonzero(active & (dV > 0.0))), int(np.count_nonzero(active))


def error_distance(R_true: np.ndarray, R_hat: np.ndarray):
    return dist_I(np.asarray(R_true) @ _t(np.asarray(R_hat)))
