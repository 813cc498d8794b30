import numpy as np
import pytest


def random_table(rng: np.random.Generator, shape) -> np.ndarray:
    """Normalized i.i.d. uniform(0, 1) cell weights."""
    t = rng.uniform(0.0, 1.0, size=shape)
    return t / t.sum()


@pytest.fixture
def rng():
    return np.random.default_rng(20140917)


@pytest.fixture
def random_joints(rng):
    """1000 joint matrices with alphabet sizes 2-4."""
    return [random_table(rng, tuple(rng.integers(2, 5, size=2))) for _ in range(1000)]


@pytest.fixture
def random_triples(rng):
    """1000 joint tables p(x, y, z) with alphabet sizes 2-3."""
    return [random_table(rng, tuple(rng.integers(2, 4, size=3))) for _ in range(1000)]


@pytest.fixture
def independent_bits():
    return np.full((2, 2), 0.25)


@pytest.fixture
def equal_bits():
    return np.array([[0.5, 0.0], [0.0, 0.5]])
