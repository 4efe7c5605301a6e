import numpy as np
import pytest

from gtlab.samplers import RngStream

TEST_SEED = 987654321


@pytest.fixture
def stream():
    return RngStream(TEST_SEED)


@pytest.fixture
def rng():
    return RngStream(TEST_SEED).generator()


def gue(rng: np.random.Generator, n: int) -> np.ndarray:
    X = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) \
        / np.sqrt(2.0)
    return (X + X.conj().T) / 2.0


def ginibre(rng: np.random.Generator, n: int) -> np.ndarray:
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) \
        / np.sqrt(2.0)
