import os
import sys
from importlib.resources import files

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from coxdense import parse_system  # noqa: E402

FIXTURES = ["fig1", "dihedral-inf", "a2", "triangle333", "dinf-x-a1", "b3", "h3", "a1xa1"]


def load(name):
    return parse_system((files("coxdense") / "fixtures" / f"{name}.cox").read_text())


@pytest.fixture(scope="session")
def fig1():
    return load("fig1")


@pytest.fixture(scope="session")
def a2():
    return load("a2")


@pytest.fixture(scope="session")
def dinf():
    return load("dihedral-inf")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
