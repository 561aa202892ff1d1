import math

import numpy as np
import pytest


def brute_force_amplitudes(n, eta, theta=None):
    """(BA)^(N-1) B |1bar> by explicit repeated 2x2 multiplication, built from
    literal matrices; shares no code with the package."""
    theta = math.pi / (2 * n) if theta is None else theta
    c, s = math.cos(theta), math.sin(theta)
    B = np.array([[c, s], [-s, c]])
    A = np.array([[math.sqrt(eta), 0.0], [0.0, 1.0]])
    M = B.copy()
    for _ in range(n - 1):
        M = B @ A @ M
    return M @ np.array([0.0, 1.0])


def brute_force_p(n, eta, theta=None):
    return float(brute_force_amplitudes(n, eta, theta)[1] ** 2)


def repeated_power(m, k):
    out = np.eye(2, dtype=complex)
    for _ in range(k):
        out = out @ m
    return out


@pytest.fixture
def oracle_p():
    return brute_force_p


@pytest.fixture
def oracle_power():
    return repeated_power


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(results):
        ok, detail = results[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
