import numpy as np
import pytest

from rotape.grid import GridSpec


@pytest.fixture
def grid16():
    return GridSpec(nh=16, nz=8)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
