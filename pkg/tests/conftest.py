import sys

import pytest

from optocool.scenario import Scenario, fixture_path


@pytest.fixture
def sideband_bs():
    return Scenario.load(fixture_path("sideband_bs"))


@pytest.fixture
def sideband_tms():
    return Scenario.load(fixture_path("sideband_tms"))


@pytest.fixture
def sec6():
    return Scenario.load(fixture_path("sec6_diamond"))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(module, "REPORT_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])
