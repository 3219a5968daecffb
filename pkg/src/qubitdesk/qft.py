"""Quantum Fourier transform: dense reference matrix and the O(n^2) gate circuit.

Both paths implement ``|z> -> 2**(-n/2) * sum_y exp(2*pi*i*y*z / 2**n) |y>``
with the package's little-endian index convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core_state import StateVector
from .errors import DomainError, ResourceError
from .gates import DENSE_MAX_QUBITS, Circuit, controlled_phase, hadamard, run_circuit, swap_gates


@dataclass(frozen=True)
class QftSpec:
    num_qubits: int

    def __post_init__(self):
        if self.num_qubits < 1:
            raise DomainError(f"QFT needs at least one qubit, got {self.num_qubits}")

    @property
    def dimension(self) -> int:
        return 1 << self.num_qubits


def qft_matrix(n: int) -> np.ndarray:
    if n > DENSE_MAX_QUBITS:
        raise ResourceError(f"dense QFT limited to {DENSE_MAX_QUBITS} qubits, got {n}")
    dim = QftSpec(n).dimension
    y = np.arange(dim)
    # reduce y*z mod 2**n before scaling so the phase stays exact in integers
    exponent = np.outer(y, y) % dim
    return np.exp(2j * np.pi * exponent / dim) / math.sqrt(dim)


@lru_cache(maxsize=32)
def qft_circuit(n: int) -> Circuit:
    """Hadamard + controlled-phase ladder, then a CNOT swap network.

    Processing qubit ``j`` from the top: H, then CPHASE(pi / 2**(j-k)) from
    every lower qubit ``k``. That leaves the output bit-reversed, which the
    final swaps undo. n(n+1)/2 ladder gates plus 3 * floor(n/2) CNOTs.
    """
    c = Circuit(QftSpec(n).num_qubits)
    for j in reversed(range(n)):
        c.append(hadamard(j))
        for k in reversed(range(j)):
            c.append(controlled_phase(math.pi / (1 << (j - k)), k, j))
    for i in range(n // 2):
        for g in swap_gates(i, n - 1 - i):
            c.append(g)
    return c


def apply_qft_circuit(s: StateVector) -> StateVector:
    return run_circuit(s, qft_circuit(s.num_qubits))


def _check_comb(r: int, z: int, n: int) -> int:
    dim = 1 << n
    if n < 1:
        raise DomainError(f"need at least one qubit, got {n}")
    if not 1 <= r <= dim:
        raise DomainError(f"period {r} outside [1, {dim}]")
    if not 0 <= z < r:
        raise DomainError(f"offset {z} outside [0, {r})")
    return -(-(dim - z) // r)


def comb_size(n: int, r: int, z: int) -> int:
    """Number of indices z, z + r, ... below 2**n."""
    return _check_comb(r, z, n)


def post_qft_amplitude_oracle(y: int, r: int, z: int, n: int) -> complex:
    """Amplitude of ``y`` after the QFT of the normalised comb on z, z+r, ....

    Sums ``exp(2*pi*i*y*(z + j*r) / 2**n)`` over the m comb points directly,
    with each phase reduced modulo 2**n in integer arithmetic, and scales by
    ``1 / sqrt(m * 2**n)``.
    """
    m = _check_comb(r, z, n)
    dim = 1 << n
    if not 0 <= y < dim:
        raise DomainError(f"index {y} out of range for {n} qubits")
    points = z + r * np.arange(m, dtype=np.int64)
    exponent = (y * points) % dim
    total = np.exp(2j * np.pi * exponent / dim).sum()
    return complex(total / math.sqrt(m * dim))


def comb_distribution(n: int, r: int, z: int) -> np.ndarray:
    """Exact post-QFT outcome probabilities of the comb, for every y at once.

    Uses the closed form of the geometric sum,
    ``|sum_j w**j|**2 = sin(pi*m*t)**2 / sin(pi*t)**2`` with
    ``t = y*r / 2**n mod 1`` (and ``m**2`` where t is an integer), so it costs
    O(2**n) and serves as the analytic sampler above state-vector scale.
    """
    m = _check_comb(r, z, n)
    dim = 1 << n
    y = np.arange(dim, dtype=np.int64)
    yr = (y * r) % dim
    num = np.sin(np.pi * ((m * yr) % dim) / dim) ** 2
    den = np.sin(np.pi * yr / dim) ** 2
    on_comb = yr == 0
    ratio = np.divide(num, den, out=np.zeros(dim), where=~on_comb)
    ratio[on_comb] = m * m
    return ratio / (m * dim)
