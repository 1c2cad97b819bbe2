import numpy as np
import pytest

from wavemodels.spectral import make_grid


@pytest.fixture
def grid64():
    return make_grid(64)


@pytest.fixture
def grid128():
    return make_grid(128)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
