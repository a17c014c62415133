import numpy as np
import pytest
from scipy.stats import ortho_group

from remest import ProblemSpec

LAMBDAS = (0.0, 0.5, 1.0, -1.0, 2.0)

# criterion id -> (passed, message); filled by test_acceptance
ACCEPTANCE_RESULTS: dict = {}


def random_rotation(dim, rng):
    if dim == 1:
        return np.array([[rng.choice([-1.0, 1.0])]])
    return ortho_group.rvs(dim, random_state=rng)


def rot90():
    return np.array([[0.0, -1.0], [1.0, 0.0]])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def worked_instance():
    return ProblemSpec.homogeneous(5, 3, 1.0, 1.0)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        ok, msg = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {msg}")
