import numpy as np
import pytest

from lawson.cone_geometry import ConeParams, all_certified_cones


@pytest.fixture
def cones():
    return all_certified_cones()


@pytest.fixture
def cone35():
    return ConeParams(k=3, h=5)


@pytest.fixture
def cone72():
    return ConeParams(k=7, h=2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240501)
