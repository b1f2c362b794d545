import math

import numpy as np
import pytest

from defectbethe.spin_algebra import (ATTRACTIVE, REPULSIVE, ModelParameters)


@pytest.fixture(scope="session")
def xxx():
    return ModelParameters.xxx()


@pytest.fixture(scope="session")
def trig():
    return ModelParameters.xxz(0.3)


@pytest.fixture(scope="session")
def repulsive4():
    # nu = pi/mu = 4, gamma = 1/(nu-1) = 1/3
    return ModelParameters.xxz(math.pi / 4.0, REPULSIVE)


@pytest.fixture(scope="session")
def attractive4():
    # nu = 4, gamma = nu - 1 = 3
    return ModelParameters.xxz(math.pi / 4.0, ATTRACTIVE)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
