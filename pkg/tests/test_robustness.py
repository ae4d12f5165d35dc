import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import solve_ivp

from so3filters.dynamics import integrate_error
from so3filters.errors import AxisUndefinedError, InvalidArgumentError
from so3filters.filters import FilterKind
from so3filters.robustness import (
    AttitudeNoise,
    GyroDisturbance,
    apply_attitude_noise,
    attenuation_check,
    error_distance,
    g_matrix,
    iss_bounds,
    lyapunov_step_violations,
    prop1_disturbance,
    prop1_norm,
    rodrigues_error_rhs,
)
from so3filters.so3 import E1, E2, E3, exp_sym, rodrigues_of, rot_angle_axis, rotation_angle, skew, weight_from_abar

from conftest import vec3

ABAR = np.diag([2.5, 2.0, 1.5])
KINDS = list(FilterKind)


# Rodrigues-coordinate error dynamics

@given(vec3, vec3)
def test_g_matrix_matches_definition(Z, d):
    G = 0.5 * (np.eye(3) + skew(Z) + np.outer(Z, Z))
    assert np.allclose(g_matrix(Z), G, atol=1e-12)
    rhs = rodrigues_error_rhs("I", Z, np.zeros((3, 3)), 0.0, d)
    assert np.allclose(rhs, -G @ d, atol=1e-10 * (1 + np.linalg.norm(Z)) ** 2 * (1 + np.linalg.norm(d)))


@pytest.mark.parametrize("kind", KINDS)
def test_rhs_equilibrium(kind):
    assert np.array_equal(rodrigues_error_rhs(kind, np.zeros(3), ABAR, 0.01, np.zeros(3)), np.zeros(3))


def test_rhs_filter1_example():
    assert np.allclose(rodrigues_error_rhs("I", E3, ABAR, 0.01, np.zeros(3)), [0.0, 0.0, -1.5], atol=1e-15)


def test_rhs_integration_matches_linear_solution():
    Z0 = np.array([0.3, -1.2, 0.7])
    sol = solve_ivp(lambda t, z: rodrigues_error_rhs("I", z, ABAR, 0.0, np.zeros(3)), (0, 2), Z0,
                    method="DOP853", rtol=1e-12, atol=1e-14)
    assert np.allclose(sol.y[:, -1], exp_sym(-ABAR, 2.0) @ Z0, atol=1e-8)


def test_rhs_matches_rotation_dynamics():
    # the Rodrigues vector of an integrated rotation trajectory follows the same ODE
    R0 = rot_angle_axis(1.5, np.array([0.0, 0.6, 0.8]))
    d = np.array([0.2, -0.1, 0.3])
    tr = integrate_error("II", weight_from_abar(ABAR), 0.01, R0, 1.0, 1e-3, disturbance=lambda k, t, R: d)
    sol = solve_ivp(lambda t, z: rodrigues_error_rhs("II", z, ABAR, 0.01, d), (0, 1), rodrigues_of(R0),
                    method="DOP853", rtol=1e-12, atol=1e-14)
    assert np.allclose(tr.Z[-1], sol.y[:, -1], atol=1e-9)


@pytest.mark.parametrize("kind", KINDS)
def test_small_error_linearization(kind):
    rng = np.random.default_rng(4)
    for _ in range(50):
        Z = rng.normal(size=3)
        Z *= 1e-3 * rng.uniform() / np.linalg.norm(Z)
        d = 1e-3 * rng.normal(size=3)
        exact = rodrigues_error_rhs(kind, Z, ABAR, 0.01, d)
        lin = -ABAR @ Z - 0.5 * d
        assert np.linalg.norm(exact - lin) <= 0.01 * (np.linalg.norm(ABAR @ Z) + 0.5 * np.linalg.norm(d))


# destabilizing disturbance

def test_prop1_values():
    assert np.allclose(prop1_disturbance(E1, 2.5, 0.0), -5.0 * E1)
    assert np.linalg.norm(prop1_disturbance(E1, 2.5, 3 / 5.0)) == pytest.approx(2.5)
    assert prop1_norm(2.5, 3 / 5.0) == pytest.approx(2.0)


def test_prop1_validation():
    with pytest.raises(InvalidArgumentError):
        prop1_disturbance(2 * E1, 2.5, 0.0)
    with pytest.raises(InvalidArgumentError):
        prop1_disturbance(E1, 2.0, 0.0, abar=ABAR)
    prop1_disturbance(E1, 2.5, 0.0, abar=ABAR)


@pytest.mark.parametrize("axis,lam", [(E1, 2.5), (E2, 2.0), (E3, 1.5)])
def test_prop1_growth_and_direction(axis, lam):
    t = np.linspace(0.0, 10.0, 201)
    sol = solve_ivp(lambda s, z: rodrigues_error_rhs("I", z, ABAR, 0.0, prop1_disturbance(axis, lam, s)),
                    (0.0, 10.0), axis, t_eval=t, method="DOP853", rtol=3e-14, atol=1e-300, max_step=1e-2)
    Z = sol.y.T
    n = np.linalg.norm(Z, axis=1)
    assert np.max(np.abs(n / prop1_norm(lam, t) - 1)) < 1e-4
    cos = np.clip(Z @ axis / n, -1.0, 1.0)
    assert np.max(np.arccos(cos)) < 1e-6


# ISS margins

def test_iss_bounds_example():
    b = iss_bounds(1.0, 0.5, 1.0, 0.01)
    assert b.k_u1 == pytest.approx(0.25, abs=1e-15)
    assert b.k_u2 == pytest.approx(0.35007002100700245, abs=1e-15)
    assert b.k_u3 == pytest.approx(0.49019607843137255, abs=1e-15)


@given(st.floats(0.05, 50.0), st.floats(0.01, 0.99), st.floats(0.1, 5.0), st.floats(0.0, 0.999))
def test_iss_ordering(r, rho, lmin, frac):
    eps = frac * r * r / (1 + r * r)
    if eps <= 0.0:
        return
    b = iss_bounds(r, rho, lmin, eps)
    assert b.k_u1 < b.k_u2 < b.k_u3


def test_iss_limit_trends():
    b = iss_bounds(1e3, 0.5, 2.0, 1e-9)
    assert b.k_u1 < 2e-3
    assert b.k_u2 == pytest.approx(1.0, rel=1e-3)
    assert b.k_u3 > 900.0


@given(st.floats(0.05, 50.0), st.floats(0.01, 0.99), st.floats(0.1, 5.0), st.floats(1e-6, 0.5),
       st.sampled_from(KINDS), st.floats(0.0, 10.0))
def test_iss_gain_consistency(r, rho, lmin, eps, kind, s):
    b = iss_bounds(r, rho, lmin, eps)
    assert b.gamma(kind, s) == pytest.approx(b.proof_gain(kind, s), rel=1e-12, abs=1e-300)
    # at the margin the ultimate bound sits at half the radius
    assert b.gamma(kind, b.k_u(kind)) == pytest.approx(r / 2, rel=1e-12)


@pytest.mark.parametrize("args", [(0.0, 0.5, 1.0, 0.01), (1.0, 1.0, 1.0, 0.01), (1.0, 0.5, 0.0, 0.01), (1.0, 0.5, 1.0, 0.0)])
def test_iss_validation(args):
    with pytest.raises(InvalidArgumentError):
        iss_bounds(*args)


def test_lyapunov_counter():
    Z = np.array([[1.0, 0, 0], [0.9, 0, 0], [0.95, 0, 0], [0.02, 0, 0], [0.03, 0, 0]])
    assert lyapunov_step_violations(Z, 0.1, 1.0) == (1, 3)


# disturbance / noise containers

def test_gyro_disturbance_bound_enforced():
    g = GyroDisturbance(lambda t: np.array([0.0, 0.0, t]), sup_norm=1.0)
    assert np.array_equal(g(0.5), [0.0, 0.0, 0.5])
    with pytest.raises(InvalidArgumentError):
        g(2.0)


def test_attitude_noise_warns_outside_small_angle():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert AttitudeNoise(lambda t: 0.1)(0.0) == 0.1
    with pytest.warns(UserWarning):
        AttitudeNoise(lambda t: 0.3)(0.0)


# attitude-measurement noise

def test_attitude_noise_zero():
    R = rot_angle_axis(0.4, E2)
    assert np.array_equal(apply_attitude_noise(R, np.eye(3), 0.0), R)


def test_attitude_noise_adds_angle():
    u = np.array([0.0, 0.6, 0.8])
    R_hat = rot_angle_axis(0.3, E1)
    R = rot_angle_axis(math.pi / 2, u) @ R_hat
    Ry = apply_attitude_noise(R, R_hat, 0.1)
    assert rotation_angle(Ry @ R_hat.T) == pytest.approx(1.6707963267948966, abs=1e-14)


def test_attitude_noise_rodrigues_expansion():
    u = np.array([0.6, 0.0, -0.8])
    n = 1e-3
    Rt = rot_angle_axis(1.2, u)
    Z = rodrigues_of(Rt)
    Zy = rodrigues_of(apply_attitude_noise(Rt, np.eye(3), n))
    z = np.linalg.norm(Z)
    approx = Z + n * (1 + z * z) / (2 - n * z) * u
    assert np.linalg.norm(Zy - approx) < 10 * n * n


@pytest.mark.parametrize("Rt", [np.eye(3), rot_angle_axis(math.pi, E2)])
def test_attitude_noise_axis_undefined(Rt):
    with pytest.raises(AxisUndefinedError):
        apply_attitude_noise(Rt, np.eye(3), 0.1)


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("mode", ["constant", "random"])
def test_attitude_noise_liss_radius(kind, mode):
    eta, r = 0.05, 1.0
    rng = np.random.default_rng(11)
    noise = (lambda k, t: eta) if mode == "constant" else (lambda k, t: rng.uniform(-eta, eta))
    R0 = rot_angle_axis(2 * math.atan(r), np.array([0.6, 0.8, 0.0]))  # |Z(0)| = r
    tr = integrate_error(kind, weight_from_abar(ABAR), 0.01, R0, 6.0, 2e-3, attitude_noise=noise,
                         method="euler", record_every=5)
    z = np.linalg.norm(tr.Z, axis=1)
    assert np.all(np.isfinite(z)) and np.max(z) <= r * 1.001
    assert np.max(z[tr.t >= 4.0]) <= 1.1 * (1 + r * r) * eta / 2


# attenuation inequality

def test_attenuation_trivial():
    t = np.linspace(0, 1, 11)
    res = attenuation_check(t, np.zeros((11, 3)), np.zeros((11, 3)), 1.0, 1.0)
    assert (res.lhs, res.rhs, res.holds, res.applicable) == (0.0, 0.0, True, True)


def test_attenuation_noise_free():
    tr = integrate_error("III", np.eye(3), 0.0, rot_angle_axis(math.pi / 2, E3), 20.0, 1e-2)
    res = attenuation_check(tr.t, tr.Z, np.zeros((len(tr.t), 3)), 1.0, 1.0)
    assert res.rhs == pytest.approx(2 * math.log(2.0), abs=1e-15)
    assert res.holds and res.lhs <= res.rhs


def test_attenuation_not_applicable_near_half_turn():
    t = np.linspace(0, 1, 3)
    Z = np.array([[0, 0, 100.0], [0, 0, 50.0], [0, 0, 10.0]])
    res = attenuation_check(t, Z, np.zeros((3, 3)), 1.0, 1.0)
    assert not res.applicable and not res.holds
    assert res.max_dist > 0.999


def test_attenuation_requires_large_gamma():
    with pytest.raises(InvalidArgumentError):
        attenuation_check([0, 1], np.zeros((2, 3)), np.zeros((2, 3)), 1.0, 0.7)


def test_error_distance():
    assert error_distance(rot_angle_axis(math.pi / 2, E1), np.eye(3)) == pytest.approx(math.sqrt(0.5))
