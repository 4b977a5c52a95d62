import numpy as np
import pytest


def disk_samples(rng, n, r_max=0.999):
    """Uniform-area samples in |z| < r_max."""
    r = r_max * np.sqrt(rng.random(n))
    theta = 2.0 * np.pi * rng.random(n)
    return r * np.exp(1j * theta)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
