from fractions import Fraction

import pytest

from garsia.algebraic import sturm_isolate
from garsia.poly import IntPolynomial
from garsia.rational import RationalInterval

ACCEPTANCE_LINES: list[str] = []


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run long reproductions")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="long-running; use --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def root_in(coeffs_high, lo=1, hi=2):
    (r,) = sturm_isolate(IntPolynomial.from_high(coeffs_high), RationalInterval(lo, hi))
    return r


@pytest.fixture
def golden():
    return root_in([1, -1, -1])


@pytest.fixture
def sqrt2():
    return root_in([1, 0, -2])


def F(s) -> Fraction:
    return Fraction(s)
