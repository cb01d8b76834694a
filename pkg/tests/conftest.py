import numpy as np
import pytest

from qradon.grid import Image


@pytest.fixture
def rng():
    return np.random.default_rng(20260811)


def random_image(n, rng, lo=0.0, hi=1.0):
    return Image(n, rng.uniform(lo, hi, size=(n, n)))
