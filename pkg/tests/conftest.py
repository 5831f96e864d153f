import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from chaosdisc.bloch import QubitArray

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# lines collected by the acceptance module, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_sphere(n, seed=0):
    rng = np.random.default_rng(seed)
    theta = np.arccos(rng.uniform(-1.0, 1.0, n))
    phi = rng.uniform(0.0, 2 * np.pi, n)
    return theta, phi


@pytest.fixture
def random_states():
    def make(n, seed=0):
        return QubitArray.from_sphere(*random_sphere(n, seed))

    return make
