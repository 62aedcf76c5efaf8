"""Shared fixtures plus the acceptance summary hook.

The acceptance tests append one line per criterion to ACCEPTANCE_LINES;
the terminal-summary hook replays them after the run so the pass/fail
status of every criterion is visible in one block even though pytest
captures stdout.
"""

import numpy as np
import pytest

from lienard.model import LienardParams, SolutionParams, solve_eta_quadratic

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


@pytest.fixture
def params():
    return LienardParams(k=1.0, omega=1.0)


@pytest.fixture
def sol():
    return SolutionParams(A=1.0, delta=0.0)


@pytest.fixture
def branches(params):
    """Both exponent branches, order (-3, -1.5)."""
    return solve_eta_quadratic(params)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
