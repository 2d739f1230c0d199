import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=300, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.integers(min_value=1, max_value=6)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def assert_close(A, B, tol=1e-10, scale=1.0):
    A, B = np.asarray(A), np.asarray(B)
    assert A.shape == B.shape, (A.shape, B.shape)
    err = np.linalg.norm(A - B) if A.size else 0.0
    assert err <= tol * max(scale, 1.0), f"deviation {err:.3e}"


ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance")
        for key in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[key])
