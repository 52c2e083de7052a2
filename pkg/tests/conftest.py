import math

import numpy as np
import pytest

from spinjcm.dynamics import JointState


def make_random_state(two_j, rng):
    d = two_j + 1
    a = rng.normal(size=d) + 1j * rng.normal(size=d)
    b = rng.normal(size=d) + 1j * rng.normal(size=d)
    b[-1] = 0.0
    norm = math.sqrt(np.vdot(a, a).real + np.vdot(b, b).real)
    return JointState(a / norm, b / norm)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def random_state(rng):
    return lambda two_j: make_random_state(two_j, rng)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.LINES:
        terminalreporter.write_line(line)
