import numpy as np
import pytest

from slenderflow.curves import make_centerline, reparameterize
from slenderflow.frames import compute_bishop_frame


@pytest.fixture(scope="session")
def unit_circle():
    return make_centerline("circle")


@pytest.fixture(scope="session")
def unit_length_circle():
    return make_centerline("circle", radius=1.0 / (2 * np.pi))


@pytest.fixture(scope="session")
def trefoil():
    return make_centerline("trefoil")


@pytest.fixture(scope="session")
def trefoil_frame(trefoil):
    return compute_bishop_frame(trefoil)


@pytest.fixture(scope="session")
def circle_frame(unit_circle):
    return compute_bishop_frame(unit_circle)


@pytest.fixture(scope="session")
def unit_hairtie09():
    return reparameterize(make_centerline("hairtie", H=0.9))
