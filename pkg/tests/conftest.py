"""Shared fixtures.

Acceptance tests report one line per criterion through ``acceptance_log``;
the lines are repeated in the terminal summary so they survive output capture.
"""

import pytest

from qlangevin.spectral import BathSpec, Lorentzian, NoiseKind, OscillatorParams

_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    def log(criterion, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return log


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def weak():
    return Lorentzian(0.3, 0.5, 0.1)


@pytest.fixture
def strong():
    return Lorentzian(2.0, 0.5, 0.1)


@pytest.fixture
def osc():
    return OscillatorParams()


@pytest.fixture
def quantum_bath(weak):
    return BathSpec(weak, 0.1, NoiseKind.QUANTUM)


@pytest.fixture
def classical_bath(weak):
    return BathSpec(weak, 0.1, NoiseKind.CLASSICAL)
