import random
from fractions import Fraction

import pytest


def rational_points(names, count, seed=0, family="LA"):
    rng = random.Random(seed)
    for _ in range(count):
        if family == "MV":
            yield {n: Fraction(rng.randint(0, 12), 12) for n in names}
        else:
            yield {n: Fraction(rng.randint(-40, 40), rng.randint(1, 6)) for n in names}


@pytest.fixture
def points():
    return rational_points
