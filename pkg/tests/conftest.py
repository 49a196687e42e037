import math

import numpy as np
import pytest

PI = math.pi


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
