import sys

import pytest

from fluxon.units import PhysicalParams


@pytest.fixture
def natural():
    return PhysicalParams.natural()



def pytest_terminal_summary(terminalreporter):
    module = next((m for m in list(sys.modules.values())
                   if getattr(m, "__file__", "") and m.__file__.endswith("test_acceptance.py")), None)
    if module is not None and module.LINES:
        terminalreporter.section("acceptance criteria")
        for line in module.LINES:
            terminalreporter.write_line(line)
