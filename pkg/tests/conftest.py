import random
from fractions import Fraction

import pytest

from tropscat.lie import LieElement, LieTerm, rotate_ccw
from tropscat.series import Series

RANK = 2
NPARAMS = 2


def rand_fraction(rng, spread=3):
    return Fraction(rng.randint(-spread, spread), rng.randint(1, 3))


def rand_j(rng, order, positive=True):
    while True:
        j = (rng.randint(0, order), rng.randint(0, order))
        if sum(j) <= order and (sum(j) >= 1 or not positive):
            return j


def rand_series(rng, order, size=4, positive=False, box=2):
    terms = {}
    for _ in range(size):
        m = (rng.randint(-box, box), rng.randint(-box, box))
        terms[(rand_j(rng, order, positive), m)] = rand_fraction(rng)
    return Series(terms, nparams=NPARAMS, rank=RANK, order=order)


def rand_lie(rng, order, size=3, box=2):
    """Random element of the maximal ideal part of h."""
    out = LieElement.zero(nparams=NPARAMS, rank=RANK, order=order)
    for _ in range(size):
        m = (0, 0)
        while m == (0, 0):
            m = (rng.randint(-box, box), rng.randint(-box, box))
        n = rotate_ccw(m)
        coeff = Series({(rand_j(rng, order), (0, 0)): rand_fraction(rng)}, nparams=NPARAMS, rank=RANK, order=order)
        out = out + LieElement([LieTerm(m, n, coeff)], nparams=NPARAMS, rank=RANK, order=order)
    return out


@pytest.fixture
def rng():
    return random.Random(20240917)
