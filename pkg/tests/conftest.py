import pytest

from nearvec import dickson_p2, prime_field, product_space, twisted_space

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def d25():
    return dickson_p2(5)


@pytest.fixture(scope="session")
def d9():
    return dickson_p2(3)


@pytest.fixture(scope="session")
def z5():
    return prime_field(5)


@pytest.fixture(scope="session")
def d25_self(d25):
    return product_space(d25, 1)


@pytest.fixture(scope="session")
def d25_sq(d25):
    return product_space(d25, 2)


@pytest.fixture(scope="session")
def t513():
    return twisted_space(5, [1, 3])


@pytest.fixture(scope="session")
def t5113():
    return twisted_space(5, [1, 1, 3])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
