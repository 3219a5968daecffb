import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qubitdesk.core_state import StateVector, new_basis_state, uniform_superposition
from qubitdesk.errors import DomainError, ResourceError
from qubitdesk.gates import validate_unitary
from qubitdesk.qft import (
    apply_qft_circuit,
    comb_distribution,
    comb_size,
    post_qft_amplitude_oracle,
    qft_circuit,
    qft_matrix,
)

from conftest import random_state


def entrywise_qft(n):
    dim = 2**n
    return np.array(
        [[cmath.exp(2j * math.pi * y * z / dim) / math.sqrt(dim) for z in range(dim)] for y in range(dim)]
    )


def spike_state(n, r, z):
    v = np.zeros(2**n, dtype=complex)
    v[z::r] = 1
    return StateVector(n, v / np.linalg.norm(v))


def test_qft_matrix_n1():
    np.testing.assert_allclose(qft_matrix(1), np.array([[1, 1], [1, -1]]) / math.sqrt(2), atol=1e-15)


def test_qft_matrix_n2_entries():
    F = qft_matrix(2)
    assert F[1, 1] == pytest.approx(0.5j, abs=1e-15)
    assert F[3, 3] == pytest.approx(0.5j, abs=1e-15)
    assert F[2, 2] == pytest.approx(0.5, abs=1e-15)
    assert F[1, 3] == pytest.approx(-0.5j, abs=1e-15)


@pytest.mark.parametrize("n", range(1, 6))
def test_qft_matrix_matches_entry_formula(n):
    np.testing.assert_allclose(qft_matrix(n), entrywise_qft(n), atol=1e-12)


@pytest.mark.parametrize("n", range(1, 11))
def test_qft_matrix_unitary(n):
    assert validate_unitary(qft_matrix(n), 1e-10)


def test_qft_matrix_resource_limit():
    with pytest.raises(ResourceError):
        qft_matrix(13)


@pytest.mark.parametrize("n", [1, 3, 6])
def test_uniform_maps_to_zero(n):
    out = qft_matrix(n) @ uniform_superposition(n).amplitudes
    np.testing.assert_allclose(out, new_basis_state(n, 0).amplitudes, atol=1e-12)


@pytest.mark.parametrize("n", [1, 4, 9])
def test_circuit_on_zero_gives_uniform(n):
    out = apply_qft_circuit(new_basis_state(n, 0))
    np.testing.assert_allclose(out.amplitudes, uniform_superposition(n).amplitudes, atol=1e-12)


def test_circuit_gate_count_quadratic():
    for n in range(1, 10):
        assert len(qft_circuit(n)) == n * (n + 1) // 2 + 3 * (n // 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32))
def test_circuit_matches_matrix(n, seed):
    s = random_state(np.random.default_rng(seed), n)
    out = apply_qft_circuit(s)
    assert np.max(np.abs(out.amplitudes - qft_matrix(n) @ s.amplitudes)) < 1e-10


def test_four_spike_comb():
    out = apply_qft_circuit(spike_state(4, 4, 0))
    probs = out.probabilities()
    support = set(np.flatnonzero(probs > 1e-12).tolist())
    assert support == {0, 4, 8, 12}
    np.testing.assert_allclose(probs[[0, 4, 8, 12]], 0.25, atol=1e-12)


def test_amplitude_oracle_examples():
    assert abs(post_qft_amplitude_oracle(0, 4, 0, 4)) ** 2 == pytest.approx(0.25, abs=1e-12)
    assert abs(post_qft_amplitude_oracle(1, 4, 0, 4)) < 1e-12
    assert abs(post_qft_amplitude_oracle(4, 4, 1, 4)) ** 2 == pytest.approx(0.25, abs=1e-12)


def test_amplitude_oracle_domain():
    with pytest.raises(DomainError):
        post_qft_amplitude_oracle(0, 4, 4, 4)
    with pytest.raises(DomainError):
        post_qft_amplitude_oracle(0, 17, 0, 4)
    with pytest.raises(DomainError):
        post_qft_amplitude_oracle(16, 4, 0, 4)


def test_comb_size():
    assert comb_size(4, 4, 1) == 4
    assert comb_size(4, 16, 7) == 1
    assert comb_size(4, 5, 2) == 3


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 8), st.data())
def test_amplitude_oracle_matches_simulation(n, data):
    r = data.draw(st.integers(1, 2**n))
    z = data.draw(st.integers(0, r - 1))
    simulated = (qft_matrix(n) @ spike_state(n, r, z).amplitudes)
    oracle = np.array([post_qft_amplitude_oracle(y, r, z, n) for y in range(2**n)])
    np.testing.assert_allclose(oracle, simulated, atol=1e-10)
    np.testing.assert_allclose(comb_distribution(n, r, z), np.abs(simulated) ** 2, atol=1e-10)


@pytest.mark.parametrize("n", range(1, 9))
def test_cancellation_off_comb(n):
    for k in range(n + 1):
        r = 2**k
        for z in {0, r // 2, r - 1}:
            probs = apply_qft_circuit(spike_state(n, r, z)).probabilities()
            step = 2**n // r
            off = probs[np.arange(2**n) % step != 0].sum()
            assert off < 1e-10
