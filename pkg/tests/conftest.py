from pathlib import Path

import pytest

from incdep.semantics import parse_team
from incdep.syntax import parse_problem

FIXTURES = Path(__file__).parent / "fixtures"


def load_problem(name):
    return parse_problem((FIXTURES / f"{name}.problem").read_text())


def load_team(name):
    return parse_team((FIXTURES / f"{name}.team").read_text())


@pytest.fixture
def fixtures_dir():
    return FIXTURES


# PASS/FAIL lines recorded by the acceptance suite, echoed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
