import itertools

import pytest
from hypothesis import settings

from msl import fixtures

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def all_subsets(E):
    E = sorted(E)
    for k in range(len(E) + 1):
        yield from (frozenset(c) for c in itertools.combinations(E, k))


@pytest.fixture(scope="session")
def small():
    return fixtures.small_fixtures()


@pytest.fixture(scope="session")
def medium():
    return fixtures.medium_fixtures()


# acceptance criteria report one line each at the end of the run
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}")
