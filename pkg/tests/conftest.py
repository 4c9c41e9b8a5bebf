import pytest

from blockdec import PrimeField


@pytest.fixture(scope="session")
def field():
    return PrimeField()


@pytest.fixture(scope="session")
def gf5():
    return PrimeField(5)
