"""Dense n-qubit state vectors, basis constructors and measurement sampling.

Basis index convention: qubit 0 is the least-significant bit of the index,
so for ``n = 3`` the amplitude at index ``0b101 = 5`` belongs to the string
with qubits 0 and 2 set.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, ResourceError, StateCorruptionError

NORM_TOL = 1e-10
CORRUPTION_TOL = 1e-8
MAX_QUBITS = 30

RandomSource = np.random.Generator


def random_source(seed: int) -> RandomSource:
    """Deterministic generator for a 64-bit seed (negative seeds wrap)."""
    return np.random.default_rng(int(seed) & 0xFFFFFFFFFFFFFFFF)


class StateVector:
    """Unit-norm amplitude vector over ``2**num_qubits`` basis strings.

    The constructor copies ``amplitudes`` into a fresh complex128 array and
    checks only the length; use :meth:`check_norm` when the caller built the
    vector by hand.
    """

    __slots__ = ("num_qubits", "amplitudes")

    def __init__(self, num_qubits: int, amplitudes):
        if num_qubits < 1:
            raise DomainError(f"need at least one qubit, got {num_qubits}")
        amps = np.array(amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != 1 << num_qubits:
            raise DomainError(
                f"{num_qubits} qubits need {1 << num_qubits} amplitudes, got {amps.size}"
            )
        self.num_qubits = num_qubits
        self.amplitudes = amps

    @classmethod
    def from_amplitudes(cls, amplitudes) -> StateVector:
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        n = amps.size.bit_length() - 1
        if n < 1 or amps.size != 1 << n:
            raise DomainError(f"length {amps.size} is not a power of two >= 2")
        return cls(n, amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def copy(self) -> StateVector:
        return StateVector(self.num_qubits, self.amplitudes)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return l2_norm(self)

    def check_norm(self, tol: float = CORRUPTION_TOL) -> None:
        norm = l2_norm(self)
        if abs(norm - 1.0) > tol:
            raise StateCorruptionError(f"state norm {norm!r} deviates from 1 by more than {tol}")

    def __repr__(self):
        return f"StateVector(num_qubits={self.num_qubits})"


def _check_index(n: int, index: int) -> int:
    index = int(index)
    if not 0 <= index < (1 << n):
        raise DomainError(f"basis index {index} out of range for {n} qubits")
    return index


def _check_qubit_count(n: int) -> None:
    if n < 1:
        raise DomainError(f"need at least one qubit, got {n}")
    if n > MAX_QUBITS:
        raise ResourceError(f"{n} qubits exceeds the dense limit of {MAX_QUBITS}")


def new_basis_state(n: int, b: int) -> StateVector:
    _check_qubit_count(n)
    b = _check_index(n, b)
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[b] = 1.0
    return StateVector(n, amps)


def uniform_superposition(n: int) -> StateVector:
    _check_qubit_count(n)
    dim = 1 << n
    return StateVector(n, np.full(dim, 1.0 / math.sqrt(dim), dtype=np.complex128))


def l2_norm(s: StateVector) -> float:
    return float(np.sqrt(np.sum(np.abs(s.amplitudes) ** 2)))


def probability_of(s: StateVector, i: int) -> float:
    i = _check_index(s.num_qubits, i)
    return float(abs(s.amplitudes[i]) ** 2)


def _cdf(s: StateVector) -> np.ndarray:
    s.check_norm()
    return np.cumsum(s.probabilities())


def _draw(cdf: np.ndarray, u):
    # side="right" never lands on a zero-probability index
    idx = np.searchsorted(cdf, u * cdf[-1], side="right")
    return np.minimum(idx, cdf.size - 1)


def measure_all(s: StateVector, rng: RandomSource) -> tuple[int, StateVector]:
    """Sample a basis index with probability ``|amplitude|**2``.

    Raises StateCorruptionError if the norm is off by more than 1e-8. One
    uniform draw is consumed per call, so a sequence of calls reproduces
    :func:`sample_outcomes` on the same generator.
    """
    cdf = _cdf(s)
    outcome = int(_draw(cdf, rng.random()))
    return outcome, new_basis_state(s.num_qubits, outcome)


def sample_outcomes(s: StateVector, shots: int, rng: RandomSource) -> np.ndarray:
    """Vectorised repeated measurement of the same (uncollapsed) state."""
    if shots < 0:
        raise DomainError(f"shots must be non-negative, got {shots}")
    cdf = _cdf(s)
    return _draw(cdf, rng.random(shots)).astype(np.int64)


def format_index(index: int, n: int) -> str:
    """Bit string with qubit ``n-1`` leftmost and qubit 0 rightmost."""
    return format(index, f"0{n}b")


def dump_state(s: StateVector, tol: float = 0.0) -> list[str]:
    """``index_bits re im`` per nonzero amplitude, ascending, 17 significant digits."""
    lines = []
    for i in np.flatnonzero(np.abs(s.amplitudes) > tol):
        # adding 0.0 folds -0.0 into 0.0
        re, im = s.amplitudes[i].real + 0.0, s.amplitudes[i].imag + 0.0
        lines.append(f"{format_index(int(i), s.num_qubits)} {re:.17g} {im:.17g}")
    return lines
