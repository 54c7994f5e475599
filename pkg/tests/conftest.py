import numpy as np
import pytest


def rel_err(result, reference):
    """Max elementwise deviation relative to the reference's peak magnitude."""
    res = np.asarray(result, dtype=complex)
    ref = np.asarray(reference, dtype=complex)
    scale = np.abs(ref).max()
    if scale == 0.0:
        return float(np.abs(res).max())
    return float(np.abs(res - ref).max() / scale)


def random_complex(rng, shape, scale=1.0):
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
