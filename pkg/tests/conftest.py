import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from ecoval import golden_scenario_path  # noqa: E402
from ecoval.scenario import load_scenario  # noqa: E402

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def golden_path():
    return str(golden_scenario_path())


@pytest.fixture(scope="session")
def golden(golden_path):
    return load_scenario(golden_path)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    setattr(item, "rep_" + rep.when, rep)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
