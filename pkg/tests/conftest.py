import math

import numpy as np
import pytest

from bernstein_siss import bspline, gaussian, orthonormalize, shannon

PI = math.pi


@pytest.fixture(scope="session")
def sh():
    return shannon()


@pytest.fixture(scope="session")
def b2():
    return bspline(2)


@pytest.fixture(scope="session")
def onspline2():
    return orthonormalize(bspline(2))


@pytest.fixture(scope="session")
def onspline4():
    return orthonormalize(bspline(4))


@pytest.fixture(scope="session")
def ongauss():
    return orthonormalize(gaussian(1.0))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
