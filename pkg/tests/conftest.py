import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from catduality.monoid import (catalog, cyclic_group, symmetric_group, trivial_monoid,
                               two_element_semilattice)


@pytest.fixture(scope="session")
def cat3():
    return catalog(3)


@pytest.fixture
def Z2():
    return cyclic_group(2)


@pytest.fixture
def Z3():
    return cyclic_group(3)


@pytest.fixture
def T():
    return two_element_semilattice()


@pytest.fixture
def one():
    return trivial_monoid()


@pytest.fixture
def S3():
    return symmetric_group(3)


# one line per acceptance criterion, echoed again after the run
ACCEPTANCE = []


@pytest.fixture
def criterion():
    def record(number, title, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + \
            (f" ({detail})" if detail else "")
        print(line)
        ACCEPTANCE.append((number, line))
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
