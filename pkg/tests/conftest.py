import numpy as np
import pytest
from hypothesis import settings, strategies as st

from so3filters.so3 import exp_so3

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

finite = st.floats(-10.0, 10.0, allow_nan=False, allow_infinity=False)
vec3 = st.tuples(finite, finite, finite).map(np.array)


@st.composite
def unit_vectors(draw):
    v = draw(st.tuples(finite, finite, finite).filter(lambda t: np.linalg.norm(t) > 1e-3))
    v = np.array(v)
    return v / np.linalg.norm(v)


@st.composite
def rotations(draw, max_angle=np.pi - 1e-3, min_angle=0.0):
    u = draw(unit_vectors())
    theta = draw(st.floats(min_angle, max_angle))
    return exp_so3(theta * u)


@st.composite
def spd_abar(draw, low=0.5, high=3.0):
    Q = draw(rotations(max_angle=np.pi))
    lam = np.array(draw(st.tuples(*[st.floats(low, high)] * 3)))
    M = (Q * lam) @ Q.T
    return 0.5 * (M + M.T)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
