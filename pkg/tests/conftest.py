import numpy as np
import pytest

from casimir_piston.modeling import PistonGeometry


@pytest.fixture(params=[0, 1, 2])
def seed(request):
    return request.param


@pytest.fixture
def rng(seed):
    return np.random.default_rng(seed)


@pytest.fixture
def unit_piston():
    return PistonGeometry(L=1.0, a=0.4)
