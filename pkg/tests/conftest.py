from functools import lru_cache

import pytest

from polyqei.spectral_numeric import nystrom_eigs

# filled by test_acceptance, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@lru_cache(maxsize=None)
def cached_eigs(n: int):
    return nystrom_eigs(n)


@pytest.fixture(scope="session")
def eigs():
    return cached_eigs


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
