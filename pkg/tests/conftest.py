import pytest

from momentpde.indices import TruncationDegrees
from momentpde.models import InitialData


@pytest.fixture(scope="session")
def u0():
    return InitialData.default()


@pytest.fixture(scope="session")
def deg222():
    return TruncationDegrees(2, 2, 2)


@pytest.fixture(scope="session")
def deg422():
    return TruncationDegrees(4, 2, 2)
