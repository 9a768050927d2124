import pytest

from circlethermo import maps


@pytest.fixture(scope="session")
def m2():
    return maps.d_adic(2)


@pytest.fixture(scope="session")
def m3():
    return maps.d_adic(3)


@pytest.fixture(scope="session")
def pw236():
    return maps.piecewise_linear([2, 3, 6])


@pytest.fixture(scope="session")
def neutral():
    return maps.neutral_doubling()


@pytest.fixture(scope="session")
def perturbed05():
    return maps.perturbed_expanding(2, 0.05)


@pytest.fixture(scope="session")
def perturbed25():
    return maps.perturbed_expanding(2, 0.25)


@pytest.fixture(scope="session")
def mp_circle():
    return maps.manneville_pomeau_circle(1.0)
