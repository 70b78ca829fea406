import pytest

from squadb.catalog import builtin_catalog, lookup
from squadb.oracle import OracleConfig


@pytest.fixture(scope="session")
def catalog():
    return builtin_catalog()


@pytest.fixture(scope="session")
def square():
    return lookup("square")


@pytest.fixture(scope="session")
def tight_cfg():
    return OracleConfig(rel_tol=1e-12, abs_tol=1e-14)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if not test_acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, note in test_acceptance.RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  ({note})")
