import pytest

from ripcert import (
    all_pairs_steiner,
    hadamard,
    paley_etf,
    realify,
    steiner_etf,
)


@pytest.fixture(scope="session")
def steiner_6x16():
    return steiner_etf(all_pairs_steiner(4), hadamard(4, "sylvester"))


@pytest.fixture(scope="session")
def paley5():
    return paley_etf(5)


@pytest.fixture(scope="session")
def paley5_real(paley5):
    return realify(paley5)


@pytest.fixture(scope="session")
def paley13():
    return paley_etf(13)


@pytest.fixture(scope="session")
def paley13_real(paley13):
    return realify(paley13)
