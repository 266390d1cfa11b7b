import pytest

from cartwin.dynamics import AxleTires, VehicleParams


@pytest.fixture
def params():
    return VehicleParams()


@pytest.fixture
def tires():
    return AxleTires()
