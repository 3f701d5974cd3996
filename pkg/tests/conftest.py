import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from nqsync.model import SystemParams

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@st.composite
def system_params(draw, max_coupling_fraction=0.95):
    """Valid, not necessarily stable, parameter sets."""
    h_ex_a = draw(st.floats(0.5, 1.5))
    h_ex_b = draw(st.floats(0.5, 1.5))
    h_an_a = draw(st.floats(0.0, 0.1))
    h_an_b = draw(st.floats(0.0, 0.1))
    half_sum = 0.5 * (h_ex_a + h_ex_b + h_an_a + h_an_b)
    return SystemParams(
        h_ex_a=h_ex_a, h_ex_b=h_ex_b, h_an_a=h_an_a, h_an_b=h_an_b,
        h=draw(st.floats(-0.5, 0.5)),
        g_ab=draw(st.floats(0.0, max_coupling_fraction)) * half_sum,
        g_ac=draw(st.floats(0.0, 0.05)),
        g_bc=draw(st.floats(0.0, 0.05)),
        kappa_a=draw(st.floats(1e-4, 0.05)),
        kappa_b=draw(st.floats(1e-4, 0.05)),
        kappa_c=draw(st.floats(1e-4, 0.05)),
        omega_c=draw(st.floats(0.0, 1.0)),
        delta_f=draw(st.floats(0.0, 0.1)),
        cavity_mode=draw(st.sampled_from(["bright", "dark"])),
    )


def random_stable_pair(rng: np.random.Generator, n: int = 6):
    """Random dense A shifted so its spectral abscissa is in [-1, -0.2]; random positive diagonal D."""
    m = rng.normal(size=(n, n))
    shift = np.linalg.eigvals(m).real.max() + rng.uniform(0.2, 1.0)
    a = m - shift * np.eye(n)
    d = np.diag(rng.uniform(0.1, 1.0, size=n))
    return a, d


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)
