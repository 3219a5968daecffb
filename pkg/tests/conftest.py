import numpy as np
import pytest

from qubitdesk.core_state import StateVector, random_source


@pytest.fixture
def rng():
    return random_source(12345)


def random_state(gen, n):
    v = gen.normal(size=1 << n) + 1j * gen.normal(size=1 << n)
    return StateVector(n, v / np.linalg.norm(v))


def random_unitary(gen, dim):
    z = gen.normal(size=(dim, dim)) + 1j * gen.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))
