import sys

import numpy as np
import pytest

from slice_bergman import quaternion as qt


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def assert_quat(actual, expected, atol=1e-12, rtol=0.0):
    actual = qt.asquat(actual)
    expected = np.broadcast_to(qt.asquat(expected), actual.shape)
    np.testing.assert_allclose(actual, expected, atol=atol, rtol=rtol)


def ball_points(rng, n, radius):
    v = rng.normal(size=(n, 4))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return v * radius * rng.uniform(0, 1, size=(n, 1)) ** 0.25


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.REPORT):
        for line in mod.report_lines(n, mod.REPORT[n]):
            terminalreporter.write_line(line)
