import numpy as np
import pytest

from isoflow.rng import SplitMix64


@pytest.fixture
def rng():
    return SplitMix64(2024)


def random_invertible(n, rng, spread=0.3):
    """Well-conditioned random invertible matrix (identity plus noise)."""
    g = np.eye(n, dtype=np.complex128) + spread * rng.complex_matrix(n)
    assert np.linalg.cond(g) < 50
    return g
