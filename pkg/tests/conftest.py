import numpy as np
import pytest
from hypothesis import settings

from sacq.boolfn import BooleanFunction, parse_function

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def bent4():
    return parse_function("x1*x2 + x3*x4", "anf")


@pytest.fixture
def and2():
    return parse_function("0001")


@pytest.fixture
def x1_2():
    return parse_function("x1", "anf", n=2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240613)


def random_functions(n, count, seed):
    rng = np.random.default_rng(seed)
    return [BooleanFunction.random(n, rng) for _ in range(count)]
