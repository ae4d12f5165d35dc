"""Numerical verification suites.

Each suite compares the implementation against an independent route (closed
form, high-accuracy ODE solution, or direct formula evaluation) and reports
one :class:`Check` per claim with its residual and threshold.  Suites are
deterministic given the seed and have no side effects.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from . import oracle
from .dynamics import first_crossing_time, integrate_error
from .filters import (
    FilterConfig,
    FilterKind,
    VectorObservation,
    distI_sq_from_vectors,
    gain_k,
    gain_k_rodrigues,
    innovation,
    innovation_from_vectors,
)
from .rng import GaussianStream
from .robustness import attenuation_check, iss_bounds, lyapunov_step_violations, prop1_disturbance, prop1_norm, rodrigues_error_rhs
from .sim import SensorConfig, TruthConfig, paper_preset, propagate_truth, run_experiment
from .so3 import (
    _I3,
    cayley,
    dist_I,
    dist_sq,
    exp_so3,
    exp_sym,
    orthonormality_error,
    psi,
    random_rotation,
    random_spd,
    rodrigues_of,
    skew,
    sym_eig,
    weight_from_abar,
)

SQ3 = 1.0 / math.sqrt(3.0)
PAPER_R = np.array([[SQ3, -SQ3, SQ3], [0.0, 0.0, 1.0]])
PAPER_RHO = np.array([1.0, 2.0])


@dataclass
class Check:
    name: str
    residual: float
    threshold: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual <= self.threshold)

    def line(self) -> str:
        status, op = ("PASS", "<=") if self.passed else ("FAIL", ">")
        extra = f" ({self.detail})" if self.detail else ""
        return f"  [{status}] {self.name}: residual {self.residual:.3g} {op} {self.threshold:g}{extra}"


@dataclass
class SuiteResult:
    suite: str
    checks: list = field(default_factory=list)
    summary: str = ""
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.passed), None)

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _tol(defaults: dict, overrides: dict | None) -> dict:
    tol = dict(defaults)
    for k, v in (overrides or {}).items():
        if k not in tol:
            raise KeyError(f"unknown tolerance {k!r}; known: {', '.join(sorted(tol))}")
        tol[k] = float(v)
    return tol


def _violation(x, lower, upper) -> float:
    return float(np.max(np.maximum(np.maximum(lower - x, x - upper), 0.0)))


# --- Lemma 1 identities ---------------------------------------------------

LEMMA1_TOL = {"psi_norm": 1e-10, "trace_sandwich": 1e-10, "psiAR_sandwich": 1e-10, "psiAR_rodrigues": 1e-10}


def suite_lemma1(seed: int = 0, tol: dict | None = None, n: int = 1000) -> SuiteResult:
    tol = _tol(LEMMA1_TOL, tol)
    rng = np.random.default_rng(seed)
    R = random_rotation(rng, n)
    Abar = random_spd(rng, n)
    A = weight_from_abar(Abar)
    d2 = dist_sq(R)
    lam, _ = sym_eig(Abar)
    lmin, lmax = lam[:, 0], lam[:, 2]
    xi = lmin / lmax

    p = psi(R)
    r1 = float(np.max(np.abs(np.einsum("ni,ni->n", p, p) - 4.0 * d2 * (1.0 - d2))))

    tr = np.trace(A @ (_I3 - R), axis1=1, axis2=2)
    r2 = _violation(tr, 4.0 * lmin * d2, 4.0 * lmax * d2)

    pa = psi(A @ R)
    q = np.einsum("ni,ni->n", pa, pa) / (2.0 * lmax) ** 2
    r3 = _violation(q, xi**2 * d2 * (1.0 - d2), d2 * (1.0 - xi**2 * d2))

    mask = np.sqrt(d2) <= 0.99
    Z = rodrigues_of(R[mask])
    z2 = np.einsum("ni,ni->n", Z, Z)
    rhs = 2.0 * np.einsum("nij,njk,nk->ni", _I3 - skew(Z), Abar[mask], Z) / (1.0 + z2)[:, None]
    r4 = float(np.max(np.abs(pa[mask] - rhs)))

    checks = [
        Check("psi_norm", r1, tol["psi_norm"]),
        Check("trace_sandwich", r2, tol["trace_sandwich"]),
        Check("psiAR_sandwich", r3, tol["psiAR_sandwich"]),
        Check("psiAR_rodrigues", r4, tol["psiAR_rodrigues"], f"{int(mask.sum())} samples with |R|_I <= 0.99"),
    ]
    npass = sum(c.passed for c in checks)
    worst = max(c.residual for c in checks)
    bound = max(c.threshold for c in checks)
    rel = "<" if worst < bound else ">="
    summary = f"lemma1: {npass}/4 identities, {n} samples, max residual {worst:.3g} {rel} {bound:g}"
    return SuiteResult("lemma1", checks, summary)


# --- closed-form Filter I solution ------------------------------------------

ORACLE_TOL = {"explicit_vs_integration": 1e-6, "distI_explicit": 1e-12, "rodrigues_linearity": 1e-10}


def suite_oracle(seed: int = 0, tol: dict | None = None, n: int = 20, horizon: float = 5.0,
                 dt: float = 1e-4, record_every: int = 100) -> SuiteResult:
    tol = _tol(ORACLE_TOL, tol)
    rng = np.random.default_rng(seed)
    Abar = random_spd(rng, n)
    A = weight_from_abar(Abar)
    R0 = random_rotation(rng, n, max_angle=2.0 * math.asin(0.95))
    traj = integrate_error("I", A, 0.0, R0, horizon, dt, record_every=record_every)
    frob = cor1 = lin = 0.0
    for b in range(n):
        Rex = oracle.explicit_error(R0[b], Abar[b], traj.t)
        frob = max(frob, float(np.max(np.linalg.norm(Rex - traj.R[:, b], axis=(1, 2)))))
        dex = oracle.distI_explicit(R0[b], Abar[b], traj.t)
        cor1 = max(cor1, float(np.max(np.abs(dex - dist_I(Rex)))))
        Zt = exp_sym(-Abar[b], traj.t) @ rodrigues_of(R0[b])
        lin = max(lin, float(np.max(np.abs(rodrigues_of(Rex) - Zt))))
    checks = [
        Check("explicit_vs_integration", frob, tol["explicit_vs_integration"], f"{n} trials, dt={dt:g}, t in [0,{horizon:g}]"),
        Check("distI_explicit", cor1, tol["distI_explicit"]),
        Check("rodrigues_linearity", lin, tol["rodrigues_linearity"]),
    ]
    return SuiteResult("oracle", checks, f"oracle: max Frobenius error {frob:.3g} over {n} trials")


# --- convergence envelopes -----------------------------------------------------

ENVELOPE_TOL = {"envelope_I": 1e-9, "envelope_II": 1e-9, "envelope_III": 1e-9}


def _admissible_configs(rng, kind: str, n: int):
    gammas, eps, d0 = np.empty(n), np.empty(n), np.empty(n)
    for i in range(n):
        while True:
            e = 10.0 ** rng.uniform(-3.0, -1.0)
            gmax = (1.0 + e) ** -0.5 if kind == "II" else 1.0 / (1.0 + e)
            g = rng.uniform(0.5, 0.99) * gmax
            xi0 = oracle.admissible_region(kind, g, e)
            if xi0 > 0.05:
                break
        gammas[i], eps[i] = g, e
        d0[i] = rng.uniform(0.05, math.sqrt(xi0) * (1.0 - 1e-6))
    return gammas, eps, d0


def suite_envelopes(seed: int = 0, tol: dict | None = None, n: int = 50, horizon: float = 5.0,
                    dt: float = 1e-3, record_every: int = 10) -> SuiteResult:
    tol = _tol(ENVELOPE_TOL, tol)
    rng = np.random.default_rng(seed)
    checks = []
    for kind in ("I", "II", "III"):
        Abar = random_spd(rng, n)
        A = weight_from_abar(Abar)
        if kind == "I":
            gammas, eps = np.full(n, np.nan), np.zeros(n)
            d0 = rng.uniform(0.05, 0.99, n)
        else:
            gammas, eps, d0 = _admissible_configs(rng, kind, n)
        axis = rng.normal(size=(n, 3))
        axis /= np.linalg.norm(axis, axis=1, keepdims=True)
        R0 = exp_so3((2.0 * np.arcsin(d0))[:, None] * axis)
        traj = integrate_error(kind, A, eps, R0, horizon, dt, record_every=record_every)
        dist = traj.dist
        worst = -math.inf
        for b in range(n):
            lam, _ = sym_eig(Abar[b])
            d0b = float(dist[0, b])
            env = oracle.bounds_for(kind, d0b, lam[0], lam[2], traj.t,
                                    None if kind == "I" else gammas[b], None if kind == "I" else eps[b])
            worst = max(worst, float(np.max(dist[:, b] - env.upper)), float(np.max(env.lower - dist[:, b])))
        checks.append(Check(f"envelope_{kind}", max(worst, 0.0), tol[f"envelope_{kind}"],
                            f"{n} configs, max excursion {worst:.3g}"))
    return SuiteResult("envelopes", checks, "envelopes: integrated errors inside analytic bounds for I, II, III")


# --- convergence time lower bound ---------------------------------------------------

CROSSING_TOL = {"crossing_violations": 0.0}


def suite_crossing(seed: int = 0, tol: dict | None = None, n: int = 100, d0: float = 0.9, B: float = 0.1,
                   dt: float = 1e-3, horizon: float = 10.0) -> SuiteResult:
    tol = _tol(CROSSING_TOL, tol)
    rng = np.random.default_rng(seed)
    Abar = random_spd(rng, n)
    A = weight_from_abar(Abar)
    axis = rng.normal(size=(n, 3))
    axis /= np.linalg.norm(axis, axis=1, keepdims=True)
    R0 = exp_so3(2.0 * math.asin(d0) * axis)
    traj = integrate_error("I", A, 0.0, R0, horizon, dt, record_every=5)
    t_meas = first_crossing_time(traj.t, traj.dist, B)
    lmax = sym_eig(Abar)[0][:, 2]
    t_low = np.array([oracle.convergence_time_lower(d0, B, l) for l in lmax])
    margin = t_meas - t_low
    bad = int(np.count_nonzero(~(margin >= 0.0)))
    checks = [Check("crossing_violations", float(bad), tol["crossing_violations"],
                    f"{n - bad}/{n} trials, min margin {float(np.min(margin)):.3g} s")]
    return SuiteResult("crossing", checks, f"crossing: measured time >= lower bound in {n - bad}/{n} trials")


# --- destabilizing disturbance ---------------------------------------------------------

PROP1_TOL = {"norm_rel": 1e-4, "direction_rad": 1e-6}


def suite_prop1(seed: int = 0, tol: dict | None = None, horizon: float = 10.0) -> SuiteResult:
    tol = _tol(PROP1_TOL, tol)
    Abar = np.diag([2.5, 2.0, 1.5])
    lam, V = sym_eig(Abar)
    tt = np.linspace(0.0, horizon, 1001)
    checks = []
    for i in range(3):
        Z0 = V[:, i]
        li = float(lam[i])

        def rhs(t, z, Z0=Z0, li=li):
            return rodrigues_error_rhs("I", z, Abar, 0.0, prop1_disturbance(Z0, li, t, Abar))

        # the disturbed trajectory is unstable (perturbations grow like e^{lambda t}),
        # so the step is capped to keep the accumulated error near round-off
        sol = solve_ivp(rhs, (0.0, horizon), Z0, method="DOP853", rtol=3e-14, atol=1e-300,
                        max_step=1e-2, t_eval=tt)
        Z = sol.y.T
        nz = np.linalg.norm(Z, axis=1)
        rel = float(np.max(np.abs(nz / prop1_norm(li, tt) - 1.0)))
        ang = float(np.max(np.arctan2(np.linalg.norm(np.cross(Z, Z0), axis=1), Z @ Z0)))
        checks.append(Check(f"norm_rel_lambda={li:g}", rel, tol["norm_rel"]))
        checks.append(Check(f"direction_lambda={li:g}", ang, tol["direction_rad"]))
    return SuiteResult("prop1", checks, "prop1: |Z(t)| follows sqrt(2 lambda t + 1) along fixed direction")


# --- local ISS margins ----------------------------------------------------------------------

ISS_TOL = {"ordering": 0.0, "gain_consistency": 1e-12, "lyapunov": 0.0, "example": 1e-4}


def liss_simulation(kind, seed: int, n: int = 20, r: float = 1.0, rho_frac: float = 0.5, epsilon: float = 0.01,
                    level: float = 0.9, horizon: float = 2.0, dt: float = 1e-4):
    """Noisy error trajectories for the Lyapunov sign test.

    Disturbances alternate between a random vector of norm up to ``s`` and
    the outward direction ``-s Z/|Z|`` (the worst case for ``V = |Z|^2/2``),
    with ``s = level * k_u`` for each trial.

    Returns ``(Z, thresholds)``: Rodrigues vectors ``(N, n, 3)`` and the
    per-trial asymptotic gains ``gamma_i(s)``.
    """
    rng = np.random.default_rng(seed)
    Abar = random_spd(rng, n)
    A = weight_from_abar(Abar)
    lmin = sym_eig(Abar)[0][:, 0]
    bounds = [iss_bounds(r, rho_frac, float(l), epsilon) for l in lmin]
    s = np.array([level * b.k_u(kind) for b in bounds])
    axis = rng.normal(size=(n, 3))
    axis /= np.linalg.norm(axis, axis=1, keepdims=True)
    R0 = cayley(0.98 * r * axis)
    noise = GaussianStream(seed)

    def disturbance(k, t, R):
        if k % 2:
            Z = rodrigues_of(R)
            nz = np.maximum(np.linalg.norm(Z, axis=-1, keepdims=True), 1e-300)
            return -s[:, None] * Z / nz
        v = noise.normal((n, 3))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        return s[:, None] * v * noise.uniform(n)[:, None]

    traj = integrate_error(kind, A, epsilon, R0, horizon, dt, disturbance=disturbance, method="euler")
    thresholds = np.array([b.gamma(kind, sb) for b, sb in zip(bounds, s)])
    return traj.Z, thresholds


def suite_iss(seed: int = 0, tol: dict | None = None, n: int = 20) -> SuiteResult:
    tol = _tol(ISS_TOL, tol)
    bad = 0
    cons = 0.0
    tested = 0
    for r in np.logspace(-2, 3, 26):
        for eps in np.logspace(-9, 0, 19):
            b = iss_bounds(float(r), 0.5, 1.0, float(eps))
            for kind in FilterKind:
                g, pg = b.gamma(kind, 1.0), b.proof_gain(kind, 1.0)
                cons = max(cons, abs(g - pg) / abs(g))
            if eps < r * r / (1.0 + r * r):
                tested += 1
                bad += not (b.k_u1 < b.k_u2 < b.k_u3)
    checks = [
        Check("ordering", float(bad), tol["ordering"], f"{tested} (r, eps) pairs"),
        Check("gain_consistency", cons, tol["gain_consistency"], "varsigma_i(r) = (1 + r^2) / k_i(r)"),
    ]
    ex = iss_bounds(1.0, 0.5, 1.0, 0.01)
    expected = (0.5 / 2.0, 0.5 / math.sqrt(2.0 * 1.02), 0.5 / 1.02)
    checks.append(Check("example", max(abs(a - e) for a, e in zip((ex.k_u1, ex.k_u2, ex.k_u3), expected)), tol["example"]))
    for j, kind in enumerate(("I", "II", "III")):
        Z, thr = liss_simulation(kind, seed + j, n=n)
        viol = steps = 0
        for b in range(Z.shape[1]):
            v, s_ = lyapunov_step_violations(Z[:, b], thr[b], 1.0)
            viol += v
            steps += s_
        checks.append(Check(f"lyapunov_{kind}", float(viol), tol["lyapunov"], f"{steps} active steps"))
    return SuiteResult("iss", checks, "iss: margins ordered, gains consistent, V decreasing outside the gain ball")


# --- gain-form consistency ---------------------------------------------------------------------

GAINS_TOL = {"gain_forms": 1e-12}


def suite_gains(seed: int = 0, tol: dict | None = None) -> SuiteResult:
    tol = _tol(GAINS_TOL, tol)
    worst = 0.0
    d = np.append(np.arange(0.0, 0.95, 0.1), 0.99)
    for eps in (1e-3, 1e-2, 1e-1):
        z2 = d / (1.0 - d)
        for kind in ("II", "III"):
            worst = max(worst, float(np.max(np.abs(gain_k(kind, d, eps) - gain_k_rodrigues(kind, z2, eps)))))
    return SuiteResult("gains", [Check("gain_forms", worst, tol["gain_forms"], f"{d.size} distances x 3 eps")],
                       "gains: rotation and Rodrigues forms agree")


# --- H-infinity attenuation ----------------------------------------------------------------------

ATTENUATION_TOL = {"noisy_runs": 0.0, "noise_free": 0.0}


def attenuation_runs(seed: int, n: int = 20, horizon: float = 60.0, dt: float = 1e-3, std: float = 0.1,
                     a: float = 1.0, gamma: float = 1.0, max_angle: float = 2.0):
    """Filter III with ``A = a I`` and ``eps = 0`` under white gyro noise; one result per run."""
    rng = np.random.default_rng(seed)
    R0 = random_rotation(rng, n, max_angle=max_angle)
    steps = int(round(horizon / dt))
    noise = GaussianStream(seed).normal((steps + 1, n, 3), std)
    traj = integrate_error("III", a * np.eye(3), 0.0, R0, horizon, dt, method="euler",
                           disturbance=lambda k, t, R: noise[k])
    Z = traj.Z
    return [attenuation_check(traj.t, Z[:, b], traj.disturbance[:, b], a, gamma) for b in range(n)]


def attenuation_noise_free(a: float = 1.0, gamma: float = 1.0, horizon: float = 20.0, dt: float = 1e-3):
    R0 = cayley(np.array([0.0, 0.0, 1.0]))
    traj = integrate_error("III", a * np.eye(3), 0.0, R0, horizon, dt)
    return attenuation_check(traj.t, traj.Z, traj.disturbance, a, gamma)


def suite_attenuation(seed: int = 0, tol: dict | None = None, n: int = 20, horizon: float = 60.0) -> SuiteResult:
    tol = _tol(ATTENUATION_TOL, tol)
    res = attenuation_runs(seed, n=n, horizon=horizon)
    excess = max(r.lhs - r.rhs for r in res)
    not_app = sum(not r.applicable for r in res)
    failed = sum(not r.holds for r in res)
    free = attenuation_noise_free()
    checks = [
        Check("noisy_runs", float(failed), tol["noisy_runs"],
              f"{n - failed}/{n} hold, {not_app} not applicable, max lhs-rhs {excess:.3g}"),
        Check("noise_free", float(not free.holds), tol["noise_free"], f"lhs {free.lhs:.6g} <= rhs {free.rhs:.6g}"),
    ]
    return SuiteResult("attenuation", checks, "attenuation: inequality holds on noisy and noise-free runs")


# --- vector-measurement identities --------------------------------------------------------------------

VECMEAS_TOL = {"innovation": 1e-12, "distance": 1e-12, "gained_innovation_rel": 1e-12}


def suite_vecmeas(seed: int = 0, tol: dict | None = None, n: int = 1000) -> SuiteResult:
    """Vector forms of the innovation and the error distance against the matrix forms.

    ``innovation`` compares the gain-free term ``-psi(A R R_hat^T)``.  With the
    gains of Filters II and III the comparison is relative: near a half turn
    ``dk/d(d^2)`` reaches ``k^2 ~ 1/eps^2``, which amplifies last-bit differences
    in the two distance evaluations.
    """
    tol = _tol(VECMEAS_TOL, tol)
    rng = np.random.default_rng(seed)
    R = random_rotation(rng, n)
    Rh = random_rotation(rng, n)
    configs = [FilterConfig.from_vectors(k, PAPER_R, PAPER_RHO, 1e-2) for k in FilterKind]
    base = VectorObservation(PAPER_R, PAPER_R, PAPER_RHO)
    r_inn = r_dist = r_rel = 0.0
    for i in range(n):
        obs = base.with_b(PAPER_R @ R[i])  # rows R^T r_j
        for fc in configs:
            v = innovation_from_vectors(fc, obs, Rh[i])
            m = innovation(fc, R[i], Rh[i])
            if fc.kind is FilterKind.I:
                r_inn = max(r_inn, float(np.max(np.abs(v - m))))
            else:
                r_rel = max(r_rel, float(np.max(np.abs(v - m)) / max(float(np.max(np.abs(m))), 1e-300)))
        r_dist = max(r_dist, abs(distI_sq_from_vectors(obs, Rh[i]) - float(dist_sq(R[i] @ Rh[i].T))))
    checks = [
        Check("innovation", r_inn, tol["innovation"], f"{n} pairs"),
        Check("distance", r_dist, tol["distance"], f"{n} pairs"),
        Check("gained_innovation_rel", r_rel, tol["gained_innovation_rel"], f"{n} pairs x filters II, III"),
    ]
    return SuiteResult("vecmeas", checks, "vecmeas: vector and matrix forms agree")


# --- discrete integrator ----------------------------------------------------------------------------

INTEGRATOR_TOL = {"closed_form": 1e-8, "orthonormality": 1e-9}


def suite_integrator(seed: int = 0, tol: dict | None = None, n_steps: int = 1_000_000,
                     omega=(0.3, -0.2, 0.5), rate: float = 1000.0) -> SuiteResult:
    tol = _tol(INTEGRATOR_TOL, tol)
    w = np.asarray(omega, dtype=float)
    cfg = TruthConfig(profile="constant:" + ",".join(repr(float(x)) for x in w), truth_rate=rate)
    horizon = n_steps / rate
    series = propagate_truth(cfg, horizon, record_every=1000)
    closed = exp_so3(w * series.t[-1])
    err = float(np.linalg.norm(series.R[-1] - closed))
    drift = float(np.max(orthonormality_error(series.R)))
    checks = [
        Check("closed_form", err, tol["closed_form"], f"{n_steps} steps"),
        Check("orthonormality", drift, tol["orthonormality"]),
    ]
    return SuiteResult("integrator", checks, f"integrator: {n_steps} steps, Frobenius error {err:.3g}")


# --- reference experiment ------------------------------------------------------------------------------

REPRODUCE_TOL = {"ordering": 0.0, "runtime_s": 10.0}


def suite_reproduce(seed: int = 0, tol: dict | None = None, level: float = 0.1) -> SuiteResult:
    tol = _tol(REPRODUCE_TOL, tol)
    t0 = time.perf_counter()
    rec = run_experiment(paper_preset(sensor=SensorConfig(seed=seed)), write=False)
    elapsed = time.perf_counter() - t0
    tI, tII, tIII = (rec.crossing_time(k, level) for k in ("I", "II", "III"))
    ok = tIII < tII < tI
    checks = [
        Check("ordering", 0.0 if ok else 1.0, tol["ordering"], f"t(III)={tIII:g} t(II)={tII:g} t(I)={tI:g}"),
        Check("runtime_s", elapsed, tol["runtime_s"]),
    ]
    return SuiteResult("reproduce", checks, f"reproduce: crossing times III {tIII:g} s, II {tII:g} s, I {tI:g} s")


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "lemma1": suite_lemma1,
    "oracle": suite_oracle,
    "envelopes": suite_envelopes,
    "crossing": suite_crossing,
    "prop1": suite_prop1,
    "iss": suite_iss,
    "gains": suite_gains,
    "attenuation": suite_attenuation,
    "vecmeas": suite_vecmeas,
    "integrator": suite_integrator,
    "reproduce": suite_reproduce,
}


TOLERANCES: dict[str, dict] = {
    "lemma1": LEMMA1_TOL,
    "oracle": ORACLE_TOL,
    "envelopes": ENVELOPE_TOL,
    "crossing": CROSSING_TOL,
    "prop1": PROP1_TOL,
    "iss": ISS_TOL,
    "gains": GAINS_TOL,
    "attenuation": ATTENUATION_TOL,
    "vecmeas": VECMEAS_TOL,
    "integrator": INTEGRATOR_TOL,
    "reproduce": REPRODUCE_TOL,
}


def run_suite(name: str, seed: int = 0, tol: dict | None = None) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    t0 = time.perf_counter()
    res = SUITES[name](seed=seed, tol=tol)
    res.elapsed = time.perf_counter() - t0
    return res


__all__ = ["Check", "SuiteResult", "SUITES", "TOLERANCES", "run_suite"]
