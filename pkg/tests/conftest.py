import random

import pytest

from digitprime import build_sieve, make_constraint


@pytest.fixture(scope="session")
def sieve20():
    return build_sieve(1 << 20)


@pytest.fixture(scope="session")
def sieve24():
    return build_sieve(1 << 24)


def random_constraint(rng, n, size=None, max_size=None):
    """Random odd constraint on n bits with |A| = size (drawn if None)."""
    if size is None:
        size = rng.randint(1, max(1, min(max_size or n, n)))
    extra = rng.sample(range(1, n), min(size - 1, n - 1))
    return make_constraint(n, [0] + extra, [1] + [rng.randint(0, 1) for _ in extra])


@pytest.fixture
def rng():
    return random.Random(20240601)
