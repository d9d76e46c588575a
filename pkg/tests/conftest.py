import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def complex_gaussian(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


# Acceptance outcomes, filled in by tests/test_acceptance.py and printed once
# at the end of the run so they show up even with output capture on.
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
