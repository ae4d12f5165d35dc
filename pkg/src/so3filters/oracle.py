"""Closed-form attitude-error solutions and convergence envelopes.

These functions never integrate anything; they are the independent ground
truth that simulated trajectories are compared against.

For Filter I the Rodrigues vector of the error obeys the linear ODE
``dZ/dt = -Abar Z``, hence ``R~(t) = cayley(exp(-Abar t) Z(R~(0)))``.  The
envelopes bound ``|R~(t)|_I`` in terms of ``|R~(0)|_I`` and the extreme
eigenvalues of ``Abar``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidArgumentError
from .so3 import cayley, dist_sq, exp_sym, psi, rodrigues_of, sym_eig


@dataclass(frozen=True)
class BoundEnvelope:
    t: np.ndarray | float
    lower: np.ndarray | float
    upper: np.ndarray | float


def _times(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0):
        raise InvalidArgumentError("time must be non-negative")
    return t


def _pack(t, lower, upper) -> BoundEnvelope:
    if np.ndim(t) == 0:
        return BoundEnvelope(float(t), float(lower), float(upper))
    return BoundEnvelope(t, lower, upper)


def explicit_error(R0: np.ndarray, Abar: np.ndarray, t) -> np.ndarray:
    """Filter I attitude error at time(s) ``t`` from ``R0``.

    ``t`` may be a scalar or a 1-D array; the result then has a leading time axis.
    """
    Z0 = rodrigues_of(R0)
    t = _times(t)
    E = exp_sym(-np.asarray(Abar, dtype=float), t)
    return cayley(E @ Z0)


def distI_explicit(R0: np.ndarray, Abar: np.ndarray, t):
    """``|R~(t)|_I`` of Filter I from the initial error, without forming ``R~(t)``.

    ``q = psi0^T exp(-2 Abar t) psi0`` and ``|R~|^2 = q / (4 (1 - d0^2)^2 + q)``.
    """
    R0 = np.asarray(R0, dtype=float)
    rodrigues_of(R0)  # rejects half turns
    p0 = psi(R0)
    d0 = float(dist_sq(R0))
    t = _times(t)
    E = exp_sym(-2.0 * np.asarray(Abar, dtype=float), t)
    q = np.einsum("i,...ij,j->...", p0, E, p0)
    c = 4.0 * (1.0 - d0) ** 2
    out = np.sqrt(q / (c + q)) if c > 0 else np.ones_like(q)
    return float(out) if out.ndim == 0 else out


def _check_d0(d0: float) -> None:
    if not 0.0 <= d0 < 1.0:
        raise DomainError(f"initial distance must satisfy 0 <= d0 < 1, got d0 = {d0}")


def _check_rates(lmin: float, lmax: float) -> None:
    if not 0.0 < lmin <= lmax:
        raise DomainError(f"eigenvalue bounds must satisfy 0 < lmin <= lmax, got ({lmin}, {lmax})")


def _filter1_curve(s: float, lam: float, t: np.ndarray) -> np.ndarray:
    # s e^{-lam t} / sqrt(1 - s^2 (1 - e^{-2 lam t})), rewritten without cancellation
    e = np.exp(-lam * t)
    return s * e / np.sqrt((1.0 - s * s) + s * s * e * e)


def bounds_filter1(d0: float, lmin: float, lmax: float, t) -> BoundEnvelope:
    """Envelope of ``|R~(t)|_I`` for Filter I."""
    _check_d0(d0)
    _check_rates(lmin, lmax)
    t = _times(t)
    return _pack(t, _filter1_curve(d0, lmax, t), _filter1_curve(d0, lmin, t))


def convergence_time_lower(d0: float, B: float, lmax: float) -> float:
    """Lower bound on the time Filter I needs to bring ``|R~|_I`` below ``B``."""
    _check_d0(d0)
    if not 0.0 < B < 1.0:
        raise DomainError(f"ball radius must satisfy 0 < B < 1, got {B}")
    if not lmax > 0.0:
        raise DomainError(f"lmax must be positive, got {lmax}")
    if B >= d0:
        return 0.0
    return math.log(d0 * math.sqrt(1.0 - B * B) / (B * math.sqrt(1.0 - d0 * d0))) / lmax


def admissible_region(kind: str, gamma: float, epsilon: float) -> float:
    """Largest admissible ``d0^2`` (exclusive) for the state-dependent-gain filters.

    Raises:
        DomainError: naming the violated inequality on ``gamma``.
    """
    if not epsilon > 0.0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    if kind == "II":
        gmax = (1.0 + epsilon) ** -0.5
        if not 0.0 < gamma < gmax:
            raise DomainError(f"need 0 < gamma < (1+eps)^(-1/2) = {gmax:.12g}, got gamma = {gamma}")
        return 1.0 - gamma * gamma * epsilon / (1.0 - gamma * gamma)
    if kind == "III":
        gmax = 1.0 / (1.0 + epsilon)
        if not 0.0 < gamma < gmax:
            raise DomainError(f"need 0 < gamma < 1/(1+eps) = {gmax:.12g}, got gamma = {gamma}")
        return 1.0 - gamma * epsilon / (1.0 - gamma)
    raise InvalidArgumentError(f"no admissibility region for filter {kind!r}")


def _check_admissible(kind: str, d0: float, gamma: float, epsilon: float) -> None:
    _check_d0(d0)
    xi0 = admissible_region(kind, gamma, epsilon)
    if not d0 * d0 < xi0:
        raise DomainError(f"need d0^2 < xi0 = {xi0:.12g}, got d0^2 = {d0 * d0:.12g}")


def _filter2_curve(s: float, x: np.ndarray) -> np.ndarray:
    # s / (cosh x + sqrt(1-s^2) sinh x), numerator and denominator scaled by e^{-x}
    c = math.sqrt(1.0 - s * s)
    e2 = np.exp(-2.0 * x)
    return 2.0 * s * np.exp(-x) / ((1.0 + c) + (1.0 - c) * e2)


def bounds_filter2(d0: float, lmin: float, lmax: float, gamma: float, epsilon: float, t) -> BoundEnvelope:
    """Envelope of ``|R~(t)|_I`` for Filter II.

    Raises:
        DomainError: if ``(gamma, epsilon, d0)`` is outside the region where the
            envelope is valid.
    """
    _check_admissible("II", d0, gamma, epsilon)
    _check_rates(lmin, lmax)
    t = _times(t)
    return _pack(t, _filter2_curve(d0, lmax * t), _filter2_curve(d0, gamma * lmin * t))


# max of e^{x/2} / cosh(x) over x >= 0, attained at x = ln(3)/2
FILTER2_EXP_CONST = 3.0 ** 0.75 / 2.0


def filter2_exponential_bound(d0: float, lmin: float, gamma: float, t):
    """Exponential majorant ``FILTER2_EXP_CONST d0 exp(-gamma lmin t / 2)`` of the Filter II upper envelope."""
    t = _times(t)
    return FILTER2_EXP_CONST * d0 * np.exp(-0.5 * gamma * lmin * t)


def bounds_filter3(d0: float, lmin: float, lmax: float, gamma: float, epsilon: float, t) -> BoundEnvelope:
    """Pure exponential envelope of ``|R~(t)|_I`` for Filter III."""
    _check_admissible("III", d0, gamma, epsilon)
    _check_rates(lmin, lmax)
    t = _times(t)
    return _pack(t, d0 * np.exp(-lmax * t), d0 * np.exp(-gamma * lmin * t))


def bounds_for(kind: str, d0: float, lmin: float, lmax: float, t, gamma: float | None = None,
               epsilon: float | None = None) -> BoundEnvelope:
    """Dispatch to the envelope of filter ``kind``."""
    kind = str(kind)
    if kind == "I":
        return bounds_filter1(d0, lmin, lmax, t)
    if gamma is None or epsilon is None:
        raise InvalidArgumentError(f"filter {kind} needs gamma and epsilon")
    if kind == "II":
        return bounds_filter2(d0, lmin, lmax, gamma, epsilon, t)
    if kind == "III":
        return bounds_filter3(d0, lmin, lmax, gamma, epsilon, t)
    raise InvalidArgumentError(f"unknown filter kind {kind!r}")


def spectrum(Abar: np.ndarray) -> tuple[float, float]:
    lam, _ = sym_eig(Abar)
    return float(lam[0]), float(lam[-1])
