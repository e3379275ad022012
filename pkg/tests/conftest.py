import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

SQRT2 = np.sqrt(2.0)


def e0_e1_reference():
    """Ground and first excited states of X + Z written out by hand (phase convention of the text)."""
    e0 = np.array([1.0, -(SQRT2 + 1.0)]) / np.sqrt(4 + 2 * SQRT2)
    e1 = np.array([1.0, SQRT2 - 1.0]) / np.sqrt(4 - 2 * SQRT2)
    return e0.astype(complex), e1.astype(complex)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_state(rng, n):
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return v / np.linalg.norm(v)


def random_unitary(rng, dim):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))
