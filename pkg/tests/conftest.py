import pytest

from powerag.ag_code import code_make
from powerag.finite_field import field_make, field_of_order
from powerag.function_field import HermitianField, RationalField

from helpers import ACCEPTANCE_LINES


@pytest.fixture(scope="session")
def gf4():
    return field_make(2, 2)


@pytest.fixture(scope="session")
def gf16():
    return field_make(2, 4)


@pytest.fixture(scope="session")
def h2():
    return HermitianField(2)


@pytest.fixture(scope="session")
def h2_code(h2):
    return code_make(h2, 3)


@pytest.fixture(scope="session")
def rs8_code():
    return code_make(RationalField(field_of_order(8)), 2)


@pytest.fixture(scope="session")
def rs4_code():
    return code_make(RationalField(field_of_order(4)), 1)


@pytest.fixture(scope="session")
def h4_code():
    return code_make(HermitianField(4), 15)


@pytest.fixture(scope="session")
def h5_code():
    return code_make(HermitianField(5), 55)


@pytest.fixture(scope="session")
def rs16_code():
    return code_make(RationalField(field_of_order(16)), 4)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
