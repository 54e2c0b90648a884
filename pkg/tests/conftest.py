import numpy as np
import pytest

from s1mk import Grid, disk, ellipse_body

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def grid256():
    return Grid(256)


@pytest.fixture(scope="session")
def unit_disk(grid256):
    return disk(grid256)


@pytest.fixture(scope="session")
def ellipse21(grid256):
    return ellipse_body(grid256, 2.0, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def acceptance():
    """Records one pass/fail line per acceptance criterion for the summary."""
    def record(num, desc, ok, detail=""):
        tag = "PASS" if ok else "FAIL"
        line = f"criterion {num:2d} {tag}  {desc}"
        if detail:
            line += f"  [{detail}]"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
