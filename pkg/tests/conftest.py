import numpy as np
import pytest


def random_spd(rng, n, conditioning=100.0):
    """Random SPD matrix with eigenvalues log-uniform in [1, conditioning]."""
    m = rng.standard_normal((n, n))
    q, r = np.linalg.qr(m)
    q = q * np.sign(np.diag(r))
    d = np.exp(rng.uniform(0.0, np.log(conditioning), n))
    return q @ np.diag(d) @ q.T


def random_sym(rng, n, scale=1.0):
    m = rng.standard_normal((n, n))
    return scale * (m + m.T) / 2.0


@pytest.fixture
def rng():
    return np.random.default_rng(202406)
