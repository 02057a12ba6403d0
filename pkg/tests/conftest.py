import sys

import pytest

from schubound.rootsys import root_system_from_label


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "ACCEPTANCE_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


def _fixture(label):
    @pytest.fixture(scope="session", name=label.lower())
    def rs_fixture():
        return root_system_from_label(label)

    return rs_fixture


a2 = _fixture("A2")
a3 = _fixture("A3")
b2 = _fixture("B2")
b3 = _fixture("B3")
g2 = _fixture("G2")
d4 = _fixture("D4")
e6 = _fixture("E6")
