import random
from fractions import Fraction

import numpy as np
import pytest

from compalg import linalg, fixture

FIXTURE_NAMES = ["F1", "F2", "F3", "F4"]
ALL_FIXTURES = FIXTURE_NAMES + ["NC"]


def random_tensor(rng: random.Random, shape, lo=-2, hi=2, density=1.0):
    t = linalg.zeros(*shape)
    for idx in np.ndindex(*shape):
        if rng.random() < density:
            t[idx] = Fraction(rng.randint(lo, hi))
    return t


def random_cochain(rng, dim_m, dim_a, arity, **kw):
    return random_tensor(rng, (dim_m,) + (dim_a,) * arity, **kw)


def random_tuple(rng, dim, arity, size, **kw):
    return tuple(random_cochain(rng, dim, dim, arity, **kw) for _ in range(size))


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(params=FIXTURE_NAMES)
def fx(request):
    return fixture(request.param)


@pytest.fixture(params=ALL_FIXTURES)
def any_fx(request):
    return fixture(request.param)
