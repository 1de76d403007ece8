import pytest

from modlattice import latoracle


@pytest.fixture(scope="session")
def bw16():
    return latoracle.bw16()


@pytest.fixture(scope="session")
def bw16_dual(bw16):
    return bw16.rescaled_dual()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS, report_lines
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in report_lines():
            terminalreporter.write_line(line)
