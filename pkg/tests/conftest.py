import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def rand_disk(rng, radius, size=None):
    r = radius * np.sqrt(rng.uniform(size=size))
    return r * np.exp(2j * np.pi * rng.uniform(size=size))
