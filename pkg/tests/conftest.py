import pytest

from padic_hyers import PrimeContext


@pytest.fixture
def q2():
    return PrimeContext(2)


@pytest.fixture
def q3():
    return PrimeContext(3)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
