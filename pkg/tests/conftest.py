import pytest

from mcd_lab.spec import grams_classical, m_p, rank2_grams


@pytest.fixture(scope="session")
def G():
    return grams_classical(4)


@pytest.fixture(scope="session")
def MP():
    return m_p(6)


@pytest.fixture(scope="session")
def R2():
    return rank2_grams(3)
