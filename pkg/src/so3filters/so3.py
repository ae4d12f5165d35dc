"""Rotation-group primitives on SO(3) and 3x3 symmetric-matrix helpers.

Vectors are ``(..., 3)`` arrays and matrices are ``(..., 3, 3)`` arrays.
Unless noted otherwise every function broadcasts over leading batch axes,
so a stack of rotations can be processed in one call.
"""
from __future__ import annotations

import numpy as np

from .errors import AxisUndefinedError, InvalidArgumentError, InvalidGainError, SingularityError

TOL_PI = 1e-6
SMALL_ANGLE = 1e-8
ORTHO_TOL = 1e-9
UNIT_TOL = 1e-9

_I3 = np.eye(3)
E1 = np.array([1.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0])


def _t(M: np.ndarray) -> np.ndarray:
    return np.swapaxes(M, -1, -2)


def cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Broadcasting cross product (much cheaper than ``np.cross`` for 3-vectors)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim == 1 and b.ndim == 1:
        a0, a1, a2 = a.tolist()
        b0, b1, b2 = b.tolist()
        return np.array([a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0])
    out = np.empty(np.broadcast_shapes(a.shape, b.shape))
    a0, a1, a2 = a[..., 0], a[..., 1], a[..., 2]
    b0, b1, b2 = b[..., 0], b[..., 1], b[..., 2]
    out[..., 0] = a1 * b2 - a2 * b1
    out[..., 1] = a2 * b0 - a0 * b2
    out[..., 2] = a0 * b1 - a1 * b0
    return out


def skew(v: np.ndarray) -> np.ndarray:
    """Skew-symmetric matrix ``[v]x`` with ``skew(v) @ w == v x w``."""
    v = np.asarray(v, dtype=float)
    x, y, z = v[..., 0], v[..., 1], v[..., 2]
    S = np.zeros(v.shape[:-1] + (3, 3))
    S[..., 0, 1] = -z
    S[..., 0, 2] = y
    S[..., 1, 0] = z
    S[..., 1, 2] = -x
    S[..., 2, 0] = -y
    S[..., 2, 1] = x
    return S


def vex(S: np.ndarray) -> np.ndarray:
    """Inverse of :func:`skew`; only the lower triangle of ``S`` is read."""
    S = np.asarray(S, dtype=float)
    return np.stack([S[..., 2, 1], S[..., 0, 2], S[..., 1, 0]], axis=-1)


def psi(M: np.ndarray) -> np.ndarray:
    """Vector part of the antisymmetric projection, ``vex((M - M^T) / 2)``."""
    M = np.asarray(M, dtype=float)
    out = np.empty(M.shape[:-1])
    out[..., 0] = M[..., 2, 1] - M[..., 1, 2]
    out[..., 1] = M[..., 0, 2] - M[..., 2, 0]
    out[..., 2] = M[..., 1, 0] - M[..., 0, 1]
    return 0.5 * out


def dist_sq(R: np.ndarray) -> np.ndarray:
    """Squared normalized distance ``tr(I - R) / 4`` of a rotation to the identity.

    Evaluated as ``||I - R||_F^2 / 8``, which is identical on SO(3) but keeps
    full relative precision for rotations close to the identity.
    """
    D = np.asarray(R, dtype=float) - _I3
    out = np.einsum("...ij,...ij->...", D, D) / 8.0
    return np.clip(out, 0.0, 1.0)


def dist_I(R: np.ndarray) -> np.ndarray:
    """Normalized Euclidean distance ``|R|_I`` in ``[0, 1]`` (``|sin(theta/2)|``)."""
    return np.sqrt(dist_sq(R))


def rotation_angle(R: np.ndarray) -> np.ndarray:
    """Rotation angle in ``[0, pi]``."""
    R = np.asarray(R, dtype=float)
    s = np.linalg.norm(psi(R), axis=-1)
    c = 0.5 * (np.trace(R, axis1=-2, axis2=-1) - 1.0)
    return np.arctan2(s, c)


def rotation_axis(R: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Unit axis ``u`` of ``R = R_a(theta, u)`` with ``theta`` in ``(0, pi)``.

    Raises:
        AxisUndefinedError: if the rotation is within ``tol`` (in ``|R|_I``)
            of the identity or of a half turn.
    """
    R = np.asarray(R, dtype=float)
    d = dist_I(R)
    bad = (d < tol) | (d > 1.0 - tol)
    if np.any(bad):
        raise AxisUndefinedError(f"rotation axis undefined at |R|_I = {float(np.ravel(d)[np.argmax(np.ravel(bad))]):.12g}")
    p = psi(R)
    return p / np.linalg.norm(p, axis=-1, keepdims=True)


def rot_angle_axis(theta, u: np.ndarray) -> np.ndarray:
    """Rodrigues' rotation formula ``I + sin(t)[u]x + (1 - cos(t))[u]x^2``."""
    u = np.asarray(u, dtype=float)
    norm = np.linalg.norm(u, axis=-1)
    if np.any(np.abs(norm - 1.0) > UNIT_TOL):
        raise InvalidArgumentError(f"rotation axis must be a unit vector, got norm {norm}")
    theta = np.asarray(theta, dtype=float)[..., None, None]
    K = skew(u)
    return _I3 + np.sin(theta) * K + (1.0 - np.cos(theta)) * (K @ K)


def exp_so3(x: np.ndarray) -> np.ndarray:
    """Matrix exponential ``exp([x]x)``.

    Uses 4th-order Taylor expansions of ``sin(t)/t`` and ``(1 - cos t)/t^2``
    below ``SMALL_ANGLE``.
    """
    x = np.asarray(x, dtype=float)
    th2 = np.einsum("...i,...i->...", x, x)
    th = np.sqrt(th2)
    small = th < SMALL_ANGLE
    if np.any(small):
        safe = np.where(small, 1.0, th)
        half = np.sin(0.5 * safe)
        a = np.where(small, 1.0 - th2 / 6.0 + th2 * th2 / 120.0, np.sin(safe) / safe)
        b = np.where(small, 0.5 - th2 / 24.0 + th2 * th2 / 720.0, 2.0 * half * half / (safe * safe))
    else:
        half = np.sin(0.5 * th)
        a = np.sin(th) / th
        b = 2.0 * half * half / th2
    # I + a [x]x + b [x]x^2 with [x]x^2 = x x^T - |x|^2 I
    ax = a[..., None] * x
    R = b[..., None, None] * (x[..., :, None] * x[..., None, :])
    diag = 1.0 - b * th2
    R[..., 0, 0] += diag
    R[..., 1, 1] += diag
    R[..., 2, 2] += diag
    R[..., 0, 1] -= ax[..., 2]
    R[..., 1, 0] += ax[..., 2]
    R[..., 0, 2] += ax[..., 1]
    R[..., 2, 0] -= ax[..., 1]
    R[..., 1, 2] -= ax[..., 0]
    R[..., 2, 1] += ax[..., 0]
    return R


def cayley(z: np.ndarray) -> np.ndarray:
    """Rotation with Rodrigues vector ``z`` (Cayley transform, total on R^3)."""
    z = np.asarray(z, dtype=float)
    n2 = np.einsum("...i,...i->...", z, z)
    zz = z[..., :, None] * z[..., None, :]
    num = (1.0 - n2)[..., None, None] * _I3 + 2.0 * zz + 2.0 * skew(z)
    return num / (1.0 + n2)[..., None, None]


def rodrigues_of(R: np.ndarray, tol_pi: float = TOL_PI) -> np.ndarray:
    """Rodrigues vector ``psi(R) / (2 (1 - |R|_I^2))`` (``tan(theta/2) u``).

    Raises:
        SingularityError: if ``|R|_I > 1 - tol_pi`` for any input rotation.
    """
    R = np.asarray(R, dtype=float)
    d2 = dist_sq(R)
    dmax = float(np.sqrt(np.max(d2)))
    if dmax > 1.0 - tol_pi:
        raise SingularityError(
            f"Rodrigues vector undefined near a half turn: |R|_I = {dmax:.12g} > {1.0 - tol_pi:.12g}"
        )
    return psi(R) / (2.0 * (1.0 - d2))[..., None]


def is_rotation(R: np.ndarray, tol: float = ORTHO_TOL) -> bool:
    R = np.asarray(R, dtype=float)
    resid = np.linalg.norm(_t(R) @ R - _I3, axis=(-2, -1))
    return bool(np.all(resid <= tol) and np.all(np.linalg.det(R) > 0))


def orthonormality_error(R: np.ndarray) -> np.ndarray:
    """``||R^T R - I||_F``."""
    R = np.asarray(R, dtype=float)
    return np.linalg.norm(_t(R) @ R - _I3, axis=(-2, -1))


def reorthonormalize(R: np.ndarray) -> np.ndarray:
    """Gram-Schmidt on the columns of ``R`` followed by a determinant sign fix."""
    R = np.asarray(R, dtype=float)
    c0 = R[..., :, 0]
    c0 = c0 / np.linalg.norm(c0, axis=-1, keepdims=True)
    c1 = R[..., :, 1] - np.einsum("...i,...i->...", c0, R[..., :, 1])[..., None] * c0
    c1 = c1 / np.linalg.norm(c1, axis=-1, keepdims=True)
    c2 = cross(c0, c1)
    # the third column of a right-handed frame is fixed by the first two,
    # so the determinant is +1 by construction
    return np.stack([c0, c1, c2], axis=-1)


def ensure_rotation(R: np.ndarray, tol: float = ORTHO_TOL) -> np.ndarray:
    """Return ``R`` unchanged unless its orthonormality error exceeds ``tol``."""
    if np.any(orthonormality_error(R) > tol):
        return reorthonormalize(R)
    return R


def _sym(M: np.ndarray) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.shape[-2:] != (3, 3):
        raise InvalidArgumentError(f"expected (..., 3, 3) array, got shape {M.shape}")
    scale = max(1.0, float(np.max(np.abs(M))))
    if np.max(np.abs(M - _t(M))) > 1e-12 * scale:
        raise InvalidArgumentError("matrix is not symmetric")
    return 0.5 * (M + _t(M))


def abar_of(A: np.ndarray) -> np.ndarray:
    """Induced gain ``(tr(A) I - A) / 2``.

    Raises:
        InvalidGainError: if the result is not positive definite.
    """
    A = _sym(A)
    Abar = 0.5 * (np.trace(A, axis1=-2, axis2=-1)[..., None, None] * _I3 - A)
    lam, _ = sym_eig(Abar)
    if np.any(lam[..., 0] <= 0.0):
        raise InvalidGainError(
            f"(tr(A) I - A)/2 is not positive definite: min eigenvalue {float(np.min(lam[..., 0])):.6g}"
        )
    return Abar


_PAIRS = ((0, 1), (0, 2), (1, 2))


def sym_eig(M: np.ndarray, tol: float = 1e-14, max_sweeps: int = 50) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of symmetric 3x3 matrices by cyclic Jacobi sweeps.

    Sweeps stop once the off-diagonal Frobenius norm drops below
    ``tol * max(1, ||M||_F)`` for every matrix in the batch.

    Returns:
        ``(lam, V)`` with eigenvalues ascending along the last axis and the
        matching eigenvectors as the columns of ``V`` (``det V = +1``).
    """
    A = _sym(M).copy()
    V = np.broadcast_to(_I3, A.shape).copy()
    scale = np.maximum(1.0, np.linalg.norm(A, axis=(-2, -1)))
    for _ in range(max_sweeps):
        off = np.sqrt(2.0 * (A[..., 0, 1] ** 2 + A[..., 0, 2] ** 2 + A[..., 1, 2] ** 2))
        if np.all(off <= tol * scale):
            break
        for p, q in _PAIRS:
            apq = A[..., p, q]
            nz = apq != 0.0
            # tiny apq may overflow theta to inf; the rotation then degenerates to t = 0
            with np.errstate(over="ignore"):
                theta = (A[..., q, q] - A[..., p, p]) / (2.0 * np.where(nz, apq, 1.0))
            sgn = np.where(theta >= 0.0, 1.0, -1.0)
            t = np.where(nz, sgn / (np.abs(theta) + np.hypot(theta, 1.0)), 0.0)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            J = np.broadcast_to(_I3, A.shape).copy()
            J[..., p, p] = c
            J[..., q, q] = c
            J[..., p, q] = s
            J[..., q, p] = -s
            A = _t(J) @ A @ J
            V = V @ J
    lam = np.diagonal(A, axis1=-2, axis2=-1).copy()
    order = np.argsort(lam, axis=-1)
    lam = np.take_along_axis(lam, order, axis=-1)
    V = np.take_along_axis(V, order[..., None, :], axis=-1)
    flip = np.linalg.det(V) < 0.0
    V[..., :, 2] = np.where(flip[..., None], -V[..., :, 2], V[..., :, 2])
    return lam, V


def exp_sym(M: np.ndarray, t=1.0) -> np.ndarray:
    """``exp(M t)`` for symmetric ``M`` via its eigen-decomposition."""
    lam, V = sym_eig(M)
    w = np.exp(lam * np.asarray(t, dtype=float)[..., None])
    return (V * w[..., None, :]) @ _t(V)


def random_rotation(rng: np.random.Generator, size=None, max_angle: float = np.pi - 1e-3,
                    min_angle: float = 0.0) -> np.ndarray:
    """Rotations with uniformly distributed axis and angle in ``[min_angle, max_angle]``."""
    shape = () if size is None else (size if isinstance(size, tuple) else (size,))
    axis = rng.normal(size=shape + (3,))
    axis /= np.linalg.norm(axis, axis=-1, keepdims=True)
    angle = rng.uniform(min_angle, max_angle, size=shape)
    return exp_so3(angle[..., None] * axis)


def random_spd(rng: np.random.Generator, size=None, low: float = 0.5, high: float = 3.0) -> np.ndarray:
    """Symmetric positive definite matrices with eigenvalues drawn from ``[low, high]``."""
    shape = () if size is None else (size if isinstance(size, tuple) else (size,))
    Q = random_rotation(rng, size, max_angle=np.pi)
    lam = rng.uniform(low, high, size=shape + (3,))
    M = (Q * lam[..., None, :]) @ _t(Q)
    return 0.5 * (M + _t(M))


def weight_from_abar(Abar: np.ndarray) -> np.ndarray:
    """Inverse of :func:`abar_of`: the ``A`` with ``(tr(A) I - A)/2 == Abar``."""
    Abar = np.asarray(Abar, dtype=float)
    return np.trace(Abar, axis1=-2, axis2=-1)[..., None, None] * _I3 - 2.0 * Abar
