import math

import numpy as np
import pytest

from lissajous_cs import ComplexAmplitude, DegenerateSubspace, Grid2D, build_by_recurrence

PAIRS = [(1, 1), (1, 2), (2, 3), (1, 3), (3, 5)]


def lcs(N, p=1, q=1, theta=0.0, mod=1.0):
    return build_by_recurrence(DegenerateSubspace(N, p, q), ComplexAmplitude(mod, theta))


def circular_density(x, y, N):
    r2 = x ** 2 + y ** 2
    return np.exp(N * np.log(np.where(r2 > 0, r2, 1e-300)) - r2 - math.lgamma(N + 1)) / np.pi


@pytest.fixture(scope="session")
def grid801():
    return Grid2D.square(8.0, 801)


@pytest.fixture(scope="session")
def grid401():
    return Grid2D.square(8.0, 401)
