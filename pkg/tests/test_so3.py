import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.spatial.transform import Rotation

from so3filters.errors import AxisUndefinedError, InvalidArgumentError, InvalidGainError, SingularityError
from so3filters.so3 import (
    E1,
    E2,
    E3,
    SMALL_ANGLE,
    abar_of,
    cayley,
    dist_I,
    dist_sq,
    ensure_rotation,
    exp_so3,
    exp_sym,
    is_rotation,
    orthonormality_error,
    psi,
    random_rotation,
    random_spd,
    reorthonormalize,
    rodrigues_of,
    rot_angle_axis,
    rotation_angle,
    rotation_axis,
    skew,
    sym_eig,
    vex,
    weight_from_abar,
)

from conftest import rotations, spd_abar, unit_vectors, vec3

A_SIM = np.array([[1.0, -1.0, 1.0], [-1.0, 1.0, -1.0], [1.0, -1.0, 7.0]]) / 3.0


# skew / vex

def test_skew_zero():
    assert np.array_equal(skew(np.zeros(3)), np.zeros((3, 3)))


def test_vex_inverts_skew():
    assert np.array_equal(vex(skew(np.array([1.0, 2.0, 3.0]))), [1.0, 2.0, 3.0])


def test_skew_e3_times_e1():
    assert np.array_equal(skew(E3) @ E1, E2)


@given(vec3, vec3)
def test_skew_is_cross_product(v, w):
    assert np.allclose(skew(v) @ w, np.cross(v, w), atol=1e-12)
    assert np.array_equal(skew(v).T, -skew(v))


# psi

def test_psi_identity_is_zero():
    assert np.array_equal(psi(np.eye(3)), np.zeros(3))


def test_psi_restricted_to_skew_is_vex():
    assert np.array_equal(psi(skew(np.array([1.0, 2.0, 3.0]))), [1.0, 2.0, 3.0])


def test_psi_quarter_turn():
    assert np.allclose(psi(rot_angle_axis(math.pi / 2, E3)), [0.0, 0.0, 1.0], atol=1e-15)


@given(vec3)
def test_psi_vanishes_on_symmetric(v):
    M = np.outer(v, v) + np.diag(v)
    assert np.array_equal(psi(M), np.zeros(3))


@given(unit_vectors(), st.floats(1e-3, math.pi - 1e-3))
def test_psi_is_sin_theta_axis(u, theta):
    assert np.allclose(psi(rot_angle_axis(theta, u)), math.sin(theta) * u, atol=1e-14)


# distance

def test_dist_identity():
    assert dist_I(np.eye(3)) == 0.0


@given(unit_vectors())
def test_dist_half_turn(u):
    assert dist_I(rot_angle_axis(math.pi, u)) == pytest.approx(1.0, abs=1e-12)


def test_dist_quarter_turn():
    # tr-based evaluation by hand: tr = 1 + 2 cos(pi/2) = 1, (3 - 1)/4 = 1/2
    assert dist_I(rot_angle_axis(math.pi / 2, E1)) == pytest.approx(0.7071067811865476, abs=1e-15)


@given(unit_vectors(), st.floats(0.0, math.pi))
def test_dist_is_abs_sin_half_angle(u, theta):
    R = rot_angle_axis(theta, u)
    assert dist_I(R) == pytest.approx(abs(math.sin(theta / 2)), abs=1e-12)
    assert dist_sq(R) == pytest.approx((3.0 - np.trace(R)) / 4.0, abs=1e-14)


def test_dist_keeps_precision_near_identity():
    R = exp_so3(np.array([1e-9, 0.0, 0.0]))
    assert dist_I(R) == pytest.approx(0.5e-9, rel=1e-6)


# angle-axis and exponential

def test_rot_angle_axis_zero():
    assert np.array_equal(rot_angle_axis(0.0, E1), np.eye(3))


def test_rot_angle_axis_half_turn_e3():
    assert np.allclose(rot_angle_axis(math.pi, E3), np.diag([-1.0, -1.0, 1.0]), atol=1e-15)


@given(unit_vectors())
def test_rot_angle_axis_full_turn(u):
    assert np.allclose(rot_angle_axis(2 * math.pi, u), np.eye(3), atol=1e-14)


def test_rot_angle_axis_rejects_non_unit():
    with pytest.raises(InvalidArgumentError):
        rot_angle_axis(0.3, np.array([1.0, 1.0, 0.0]))


@given(unit_vectors(), st.floats(-2 * math.pi, 2 * math.pi))
def test_rot_angle_axis_matches_scipy(u, theta):
    assert np.allclose(rot_angle_axis(theta, u), Rotation.from_rotvec(theta * u).as_matrix(), atol=1e-13)
    assert is_rotation(rot_angle_axis(theta, u))


def test_exp_zero():
    assert np.array_equal(exp_so3(np.zeros(3)), np.eye(3))


def test_exp_matches_angle_axis():
    assert np.allclose(exp_so3(math.pi / 2 * E3), rot_angle_axis(math.pi / 2, E3), atol=1e-15)


@given(vec3)
def test_exp_group_inverse(x):
    assert np.allclose(exp_so3(x) @ exp_so3(-x), np.eye(3), atol=1e-13)


def test_exp_taylor_branch_continuity():
    u = np.array([1.0, -2.0, 0.5]) / np.linalg.norm([1.0, -2.0, 0.5])
    below = exp_so3(SMALL_ANGLE * (1 - 1e-9) * u)
    above = exp_so3(SMALL_ANGLE * (1 + 1e-9) * u)
    assert np.max(np.abs(below - above)) < 1e-12
    assert np.allclose(below, Rotation.from_rotvec(SMALL_ANGLE * u).as_matrix(), atol=1e-15)


def test_exp_batched():
    x = np.random.default_rng(0).normal(size=(4, 5, 3))
    R = exp_so3(x)
    assert R.shape == (4, 5, 3, 3)
    assert np.allclose(R[2, 3], exp_so3(x[2, 3]))


# Cayley and Rodrigues

def test_cayley_zero():
    assert np.array_equal(cayley(np.zeros(3)), np.eye(3))


def test_cayley_of_tan_half_angle():
    assert np.allclose(cayley(math.tan(math.pi / 4) * E2), rot_angle_axis(math.pi / 2, E2), atol=1e-15)


@given(vec3)
def test_cayley_is_rotation_off_half_turns(z):
    R = cayley(z)
    assert is_rotation(R)
    assert dist_I(R) < 1.0


@given(vec3)
def test_rodrigues_inverts_cayley(z):
    assert np.allclose(rodrigues_of(cayley(z)), z, rtol=1e-10, atol=1e-12)


@given(rotations(max_angle=2 * math.asin(0.99)))
def test_cayley_inverts_rodrigues(R):
    assert np.linalg.norm(cayley(rodrigues_of(R)) - R) < 1e-10


@given(rotations(max_angle=2 * math.asin(0.99)))
def test_rodrigues_norm_matches_distance(R):
    Z = rodrigues_of(R)
    z2 = Z @ Z
    assert dist_sq(R) == pytest.approx(z2 / (1 + z2), abs=1e-12)


def test_rodrigues_identity():
    assert np.array_equal(rodrigues_of(np.eye(3)), np.zeros(3))


def test_rodrigues_quarter_turn():
    assert np.allclose(rodrigues_of(rot_angle_axis(math.pi / 2, E3)), [0.0, 0.0, 1.0], atol=1e-15)


def test_rodrigues_large_angle():
    Z = rodrigues_of(rot_angle_axis(2.8, E1))
    assert Z == pytest.approx([5.79788371548288964, 0.0, 0.0], rel=1e-12, abs=1e-12)
    assert Z[0] == pytest.approx(math.tan(1.4), rel=1e-12)


def test_rodrigues_rejects_half_turn():
    with pytest.raises(SingularityError, match="0.99999"):
        rodrigues_of(rot_angle_axis(math.pi - 1e-4, E2))


# rotation angle / axis

@given(unit_vectors(), st.floats(1e-3, math.pi - 1e-3))
def test_angle_axis_extraction(u, theta):
    R = rot_angle_axis(theta, u)
    assert rotation_angle(R) == pytest.approx(theta, abs=1e-12)
    assert np.allclose(rotation_axis(R), u, atol=1e-10)


@pytest.mark.parametrize("R", [np.eye(3), rot_angle_axis(math.pi, E1)])
def test_axis_undefined(R):
    with pytest.raises(AxisUndefinedError):
        rotation_axis(R)


# re-projection

def test_reorthonormalize_restores_rotation():
    R = rot_angle_axis(0.7, E2) + 1e-6 * np.random.default_rng(1).normal(size=(3, 3))
    assert orthonormality_error(R) > 1e-9
    Q = ensure_rotation(R)
    assert is_rotation(Q, 1e-14)
    assert np.linalg.norm(Q - R) < 1e-5


def test_ensure_rotation_leaves_valid_input():
    R = rot_angle_axis(0.7, E2)
    assert ensure_rotation(R) is R


def test_reorthonormalize_fixes_reflection():
    Q = reorthonormalize(np.diag([1.0, 1.0, -1.0]))
    assert np.linalg.det(Q) == pytest.approx(1.0)


# induced gain

def test_abar_diag():
    assert np.array_equal(abar_of(np.diag([1.0, 2.0, 3.0])), np.diag([2.5, 2.0, 1.5]))


def test_abar_identity():
    assert np.array_equal(abar_of(np.eye(3)), np.eye(3))


def test_abar_reference_weighting_positive_definite():
    lam, _ = sym_eig(abar_of(A_SIM))
    assert np.all(lam > 0)
    # eigenvalues of Abar: 1.5 (from the e_y + e_x direction) and 0.75 -/+ sqrt(...)
    assert np.allclose(lam, np.sort(np.linalg.eigvalsh(abar_of(A_SIM))), atol=1e-14)


def test_abar_rejects_indefinite():
    with pytest.raises(InvalidGainError):
        abar_of(np.diag([10.0, 0.0, 0.0]))


def test_abar_rejects_asymmetric():
    with pytest.raises(InvalidArgumentError):
        abar_of(np.array([[1.0, 2.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]))


@given(spd_abar())
def test_weight_from_abar_inverts(Abar):
    assert np.allclose(abar_of(weight_from_abar(Abar)), Abar, atol=1e-12)


# eigen-decomposition

def test_sym_eig_diag():
    lam, V = sym_eig(np.diag([3.0, 1.0, 2.0]))
    assert np.array_equal(lam, [1.0, 2.0, 3.0])
    assert np.allclose(np.abs(V), np.eye(3)[:, [1, 2, 0]])


def test_sym_eig_degenerate():
    lam, V = sym_eig(np.eye(3))
    assert np.array_equal(lam, [1.0, 1.0, 1.0])
    assert np.allclose(V.T @ V, np.eye(3), atol=1e-12)


def test_sym_eig_reconstruction_reference():
    Abar = abar_of(A_SIM)
    lam, V = sym_eig(Abar)
    assert np.max(np.abs((V * lam) @ V.T - Abar)) < 1e-12


@given(spd_abar(low=-3.0, high=3.0))
def test_sym_eig_properties(M):
    lam, V = sym_eig(M)
    scale = max(1.0, np.linalg.norm(M))
    assert np.all(np.diff(lam) >= 0)
    assert np.max(np.abs(M @ V - V * lam)) <= 1e-10 * scale
    assert np.max(np.abs(V.T @ V - np.eye(3))) <= 1e-12
    assert np.allclose(lam, np.linalg.eigvalsh(M), atol=1e-12 * scale)


def test_sym_eig_batched():
    M = random_spd(np.random.default_rng(3), (7,))
    lam, V = sym_eig(M)
    assert lam.shape == (7, 3) and V.shape == (7, 3, 3)
    assert np.allclose((V * lam[:, None, :]) @ np.swapaxes(V, 1, 2), M, atol=1e-12)


def test_exp_sym_zero_time():
    assert np.allclose(exp_sym(np.diag([1.0, 2.0, 3.0]), 0.0), np.eye(3), atol=1e-15)


def test_exp_sym_diagonal():
    out = exp_sym(np.diag([-1.0, -2.0, -3.0]), 1.0)
    assert np.allclose(out, np.diag(np.exp([-1.0, -2.0, -3.0])), atol=1e-15)


@given(spd_abar(low=-2.0, high=2.0), st.floats(0.0, 2.0), st.floats(0.0, 2.0))
def test_exp_sym_semigroup(M, s, t):
    assert np.allclose(exp_sym(M, s) @ exp_sym(M, t), exp_sym(M, s + t), rtol=1e-12, atol=1e-12)


def test_exp_sym_time_vector():
    M = np.diag([-1.0, -2.0, -3.0])
    t = np.array([0.0, 0.5, 1.0])
    out = exp_sym(M, t)
    assert out.shape == (3, 3, 3)
    assert np.allclose(out[1], exp_sym(M, 0.5))


def test_random_rotation_respects_angle_range():
    R = random_rotation(np.random.default_rng(0), 200, max_angle=1.0)
    assert np.all(rotation_angle(R) <= 1.0 + 1e-12)


# structural identities of the weighted error function

@given(rotations(), spd_abar(low=0.2, high=3.0))
def test_psi_norm_and_trace_sandwich(R, Abar):
    A = weight_from_abar(Abar)
    d2 = dist_sq(R)
    lam = np.linalg.eigvalsh(Abar)
    p = psi(R)
    assert p @ p == pytest.approx(4 * d2 * (1 - d2), abs=1e-10)
    tr = np.trace(A @ (np.eye(3) - R))
    assert 4 * lam[0] * d2 - 1e-10 <= tr <= 4 * lam[2] * d2 + 1e-10


@given(rotations(max_angle=2 * math.asin(0.99)), spd_abar(low=0.2, high=3.0))
def test_psi_of_weighted_rotation_in_rodrigues_form(R, Abar):
    A = weight_from_abar(Abar)
    Z = rodrigues_of(R)
    expected = 2 * (np.eye(3) - skew(Z)) @ Abar @ Z / (1 + Z @ Z)
    assert np.allclose(psi(A @ R), expected, atol=1e-10 * max(1.0, np.linalg.norm(Abar)))


@given(rotations(), spd_abar(low=0.2, high=3.0))
def test_psi_of_weighted_rotation_sandwich(R, Abar):
    A = weight_from_abar(Abar)
    d2 = dist_sq(R)
    lam = np.linalg.eigvalsh(Abar)
    xi = lam[0] / lam[2]
    n2 = psi(A @ R) @ psi(A @ R)
    lo = 4 * xi * lam[0] ** 2 * (1 - d2) * d2
    hi = 4 * lam[2] ** 2 * (1 - xi**2 * d2) * d2
    assert lo - 1e-10 <= n2 <= hi + 1e-10
