"""Complementary attitude filters on SO(3).

Three filters share the update ``dR_hat/dt = R_hat [omega_y - R_hat^T sigma]x``
and differ only in the scalar gain multiplying the innovation
``sigma = -k(R_y R_hat^T) psi(A R_y R_hat^T)``:

* Filter I   -- ``k = 1``
* Filter II  -- ``k = (1 + eps - |R~|_I^2)^(-1/2)``
* Filter III -- ``k = (1 + eps - |R~|_I^2)^(-1)``

The innovation can be formed from a reconstructed attitude ``R_y`` or
directly from body-frame measurements of known inertial directions.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateObservationError, InvalidArgumentError
from .so3 import _t, abar_of, cross, dist_sq, ensure_rotation, exp_so3, psi, sym_eig

COLLINEAR_TOL = 1e-6


class FilterKind(str, enum.Enum):
    I = "I"
    II = "II"
    III = "III"

    def __str__(self) -> str:
        return self.value


def gain_k(kind, distI_sq, epsilon: float = 0.0):
    """State-dependent gain as a function of the squared attitude error distance."""
    kind = FilterKind(kind)
    d = np.asarray(distI_sq, dtype=float)
    if kind is FilterKind.I:
        out = np.ones_like(d)
    else:
        base = 1.0 + epsilon - d
        if np.any(base <= 0.0):
            raise InvalidArgumentError(f"gain undefined: 1 + eps - d = {float(np.min(base))} <= 0")
        out = base ** -0.5 if kind is FilterKind.II else 1.0 / base
    return float(out) if out.ndim == 0 else out


def gain_k_rodrigues(kind, z_norm_sq, epsilon: float = 0.0):
    """The same gain expressed through the squared Rodrigues-vector norm."""
    kind = FilterKind(kind)
    s = 1.0 + np.asarray(z_norm_sq, dtype=float)
    if kind is FilterKind.I:
        out = np.ones_like(s)
    else:
        ratio = s / (1.0 + epsilon * s)
        out = np.sqrt(ratio) if kind is FilterKind.II else ratio
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class FilterConfig:
    """Filter kind, weighting matrix ``A`` and gain parameter ``epsilon``.

    The induced gain ``Abar`` and its spectral data are cached at construction.
    """

    kind: FilterKind
    A: np.ndarray
    epsilon: float = 1e-2
    Abar: np.ndarray = field(init=False, repr=False)
    lmin: float = field(init=False)
    lmax: float = field(init=False)
    xi: float = field(init=False)

    def __post_init__(self):
        kind = FilterKind(self.kind)
        A = np.array(self.A, dtype=float)
        if A.shape != (3, 3):
            raise InvalidArgumentError(f"A must be 3x3, got {A.shape}")
        if kind is not FilterKind.I and not self.epsilon > 0.0:
            raise InvalidArgumentError(f"epsilon must be > 0 for filter {kind}, got {self.epsilon}")
        Abar = abar_of(A)
        lam, _ = sym_eig(Abar)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "A", 0.5 * (A + A.T))
        object.__setattr__(self, "Abar", Abar)
        object.__setattr__(self, "lmin", float(lam[0]))
        object.__setattr__(self, "lmax", float(lam[2]))
        object.__setattr__(self, "xi", float(lam[0] / lam[2]))

    @classmethod
    def from_vectors(cls, kind, r, rho, epsilon: float = 1e-2) -> "FilterConfig":
        """Config whose ``A`` is the weighted sum ``sum_i rho_i r_i r_i^T``."""
        return cls(kind, weight_matrix(r, rho), epsilon)


@dataclass(frozen=True, eq=False)
class FilterState:
    R_hat: np.ndarray
    t: float = 0.0
    # innovation used by the step that produced this state
    sigma: np.ndarray = field(default_factory=lambda: np.zeros(3))


def weight_matrix(r, rho) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    rho = np.asarray(rho, dtype=float)
    return np.einsum("i,ij,ik->jk", rho, r, r)


@dataclass(frozen=True, eq=False)
class VectorObservation:
    """Body-frame measurements ``b_i`` of inertial directions ``r_i`` with weights ``rho_i``."""

    r: np.ndarray
    b: np.ndarray
    rho: np.ndarray

    def __post_init__(self):
        r = np.atleast_2d(np.asarray(self.r, dtype=float))
        b = np.atleast_2d(np.asarray(self.b, dtype=float))
        rho = np.atleast_1d(np.asarray(self.rho, dtype=float))
        n = r.shape[0]
        if r.shape != (n, 3) or b.shape != (n, 3) or rho.shape != (n,):
            raise InvalidArgumentError(f"shape mismatch: r {r.shape}, b {b.shape}, rho {rho.shape}")
        if n < 2:
            raise InvalidArgumentError("at least two vector measurements are required")
        if np.any(rho <= 0.0):
            raise InvalidArgumentError("weights rho_i must be positive")
        pair = _first_noncollinear_pair(r)
        if pair is None:
            raise DegenerateObservationError("reference vectors are collinear")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "rho", rho)
        # reference-side quantities do not depend on b and are reused by with_b
        object.__setattr__(self, "_pair", pair)
        object.__setattr__(self, "_ref_triad", _triad(r[pair[0]], r[pair[1]]))
        object.__setattr__(self, "_A", weight_matrix(r, rho))

    def weight_matrix(self) -> np.ndarray:
        return self._A.copy()

    def with_b(self, b) -> "VectorObservation":
        """Same references and weights with new body-frame measurements."""
        b = np.asarray(b, dtype=float)
        if b.shape != self.r.shape:
            raise InvalidArgumentError(f"shape mismatch: r {self.r.shape}, b {b.shape}")
        obs = object.__new__(VectorObservation)
        for name in ("r", "rho", "_pair", "_ref_triad", "_A"):
            object.__setattr__(obs, name, getattr(self, name))
        object.__setattr__(obs, "b", b)
        return obs


def _norm(v: np.ndarray) -> float:
    return math.sqrt(float(np.dot(v, v)))


def _unit(v: np.ndarray) -> np.ndarray:
    return v / _norm(v)


def _first_noncollinear_pair(r: np.ndarray):
    n = r.shape[0]
    ru = [_unit(v) for v in r]
    for i in range(n):
        for j in range(i + 1, n):
            if _norm(cross(ru[i], ru[j])) > COLLINEAR_TOL:
                return i, j
    return None


def _triad(v1: np.ndarray, v2: np.ndarray) -> np.ndarray:
    n1, n2 = _norm(v1), _norm(v2)
    c = cross(v1, v2)
    nc = _norm(c)
    if nc < COLLINEAR_TOL * n1 * n2:
        raise DegenerateObservationError(f"vector pair is collinear (|v1 x v2| = {nc:.3e})")
    u1 = v1 / n1
    u2 = c / nc
    return np.stack([u1, u2, cross(u1, u2)])


def sigma_from_error(kind, A: np.ndarray, epsilon: float, Rt_y: np.ndarray) -> np.ndarray:
    """Innovation ``-k(Rt_y) psi(A Rt_y)`` for a (batch of) measured attitude error(s)."""
    k = gain_k(kind, dist_sq(Rt_y), epsilon)
    return -np.asarray(k)[..., None] * psi(A @ Rt_y)


def innovation(config: FilterConfig, R_y: np.ndarray, R_hat: np.ndarray) -> np.ndarray:
    """Innovation from a reconstructed attitude ``R_y``."""
    return sigma_from_error(config.kind, config.A, config.epsilon, R_y @ _t(R_hat))


def psi_from_vectors(obs: VectorObservation, R_hat: np.ndarray) -> np.ndarray:
    """``psi(A R R_hat^T)`` as ``R_hat sum_i rho_i (b_i x R_hat^T r_i) / 2``."""
    r_body = obs.r @ R_hat  # rows are R_hat^T r_i
    s = np.einsum("i,ij->j", obs.rho, cross(obs.b, r_body))
    return 0.5 * (R_hat @ s)


def distI_sq_from_vectors(obs: VectorObservation, R_hat: np.ndarray) -> float:
    """Squared attitude-error distance from two vector measurements.

    Builds orthonormal triads from the first noncollinear reference pair and
    the matching (normalized) body measurements, then evaluates
    ``sum_i ||w_i - R_hat^T u_i||^2 / 8``.
    """
    i, j = obs._pair
    U = obs._ref_triad
    W = _triad(obs.b[i], obs.b[j])
    D = W - U @ R_hat
    return float(np.clip(np.sum(D * D) / 8.0, 0.0, 1.0))


def innovation_from_vectors(config: FilterConfig, obs: VectorObservation, R_hat: np.ndarray) -> np.ndarray:
    """Innovation computed directly from vector measurements.

    ``config.A`` must equal the observation's weight matrix, otherwise the
    vector identity does not hold and the call is rejected.
    """
    A_obs = obs._A
    if not (config.A is A_obs or np.array_equal(config.A, A_obs)
            or np.allclose(config.A, A_obs, rtol=1e-12, atol=1e-12)):
        raise InvalidArgumentError("config.A does not match sum_i rho_i r_i r_i^T of the observation")
    p = psi_from_vectors(obs, R_hat)
    if config.kind is FilterKind.I:
        return -p
    k = gain_k(config.kind, distI_sq_from_vectors(obs, R_hat), config.epsilon)
    return -k * p


def filter_step(config: FilterConfig, state: FilterState, omega_y, measurement, dt: float) -> FilterState:
    """Advance the estimate by one sample with the group-exact update.

    ``R_hat <- R_hat exp([(omega_y - R_hat^T sigma) dt]x)``, with ``omega_y``
    and ``sigma`` held constant over the interval.  ``measurement`` is either
    a :class:`VectorObservation` or a reconstructed attitude matrix.  If noisy
    body vectors turn out collinear the previous innovation is reused.
    """
    if not dt > 0.0:
        raise InvalidArgumentError(f"dt must be positive, got {dt}")
    R_hat = state.R_hat
    if isinstance(measurement, VectorObservation):
        try:
            sigma = innovation_from_vectors(config, measurement, R_hat)
        except DegenerateObservationError:
            sigma = state.sigma
    else:
        sigma = innovation(config, np.asarray(measurement, dtype=float), R_hat)
    omega_hat = np.asarray(omega_y, dtype=float) - R_hat.T @ sigma
    R_next = ensure_rotation(R_hat @ exp_so3(omega_hat * dt))
    return FilterState(R_next, state.t + dt, sigma)
