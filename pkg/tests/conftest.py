import numpy as np
import pytest

from jobshop.instance import JsspInstance, parse_instance

TINY1 = "1 1\n0 5\n"
TINY2 = "2 2\n0 3 1 2\n1 2 0 4\n"


def random_instance(n_jobs, n_machines, rng, max_time=20, name=None):
    machines = np.array([rng.permutation(n_machines) for _ in range(n_jobs)])
    times = rng.integers(1, max_time + 1, size=(n_jobs, n_machines))
    return JsspInstance(name or f"rand{n_jobs}x{n_machines}", machines, times)


@pytest.fixture
def tiny1():
    return parse_instance(TINY1, name="tiny1")


@pytest.fixture
def tiny2():
    return parse_instance(TINY2, name="tiny2")


@pytest.fixture
def pinned3x3():
    return random_instance(3, 3, np.random.default_rng(2024), name="pinned3x3")


# One line per acceptance criterion, echoed in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
