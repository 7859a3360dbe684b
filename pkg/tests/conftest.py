import random
from fractions import Fraction

import pytest

from hvsl2 import RootData


_rings: dict = {}


def get_ring(ell: int, **kw) -> RootData:
    key = (ell, tuple(sorted(kw.items())))
    if key not in _rings:
        _rings[key] = RootData(ell, **kw)
    return _rings[key]


@pytest.fixture
def rng():
    return random.Random(20240817)


@pytest.fixture(params=[3, 4, 5, 6])
def small_ring(request):
    return get_ring(request.param)


@pytest.fixture
def ring4():
    return get_ring(4)


@pytest.fixture
def ring5():
    return get_ring(5)


@pytest.fixture
def ring6():
    return get_ring(6)


GRADES = (Fraction(0), Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(7, 5))
