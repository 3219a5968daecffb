"""Grover search with a counted phase oracle and reflection about the mean."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core_state import RandomSource, StateVector, measure_all, uniform_superposition
from .errors import DomainError

FULL_SIMULATION_MAX_QUBITS = 16


class PredicateOracle:
    """Black-box ``f: {0,1}^n -> {0,1}`` with an evaluation counter.

    One superposed phase flip and one classical query each count as a single
    evaluation. The truth table is tabulated once, lazily, so repeated
    superposed calls cost O(2**n) array work rather than 2**n Python calls;
    the tabulation itself is not counted.
    """

    def __init__(self, num_bits: int, f: Callable[[int], int]):
        if num_bits < 1:
            raise DomainError(f"need at least one bit, got {num_bits}")
        self.num_bits = num_bits
        self.f = f
        self.call_count = 0
        self._table = None

    @classmethod
    def from_solutions(cls, num_bits: int, solutions) -> PredicateOracle:
        marked = frozenset(int(x) for x in solutions)
        for x in marked:
            if not 0 <= x < (1 << num_bits):
                raise DomainError(f"solution {x} out of range for {num_bits} bits")
        return cls(num_bits, lambda x: int(x in marked))

    def truth_table(self) -> np.ndarray:
        if self._table is None:
            table = np.fromiter((self.f(x) for x in range(1 << self.num_bits)), dtype=np.int8)
            if not np.isin(table, (0, 1)).all():
                raise DomainError("predicate must return 0 or 1")
            self._table = table.astype(bool)
        return self._table

    def count_solutions(self) -> int:
        return int(self.truth_table().sum())

    def query(self, x: int) -> int:
        self.call_count += 1
        return int(self.f(x))


def oracle_phase_flip(s: StateVector, o: PredicateOracle) -> StateVector:
    if o.num_bits != s.num_qubits:
        raise DomainError(f"oracle has {o.num_bits} bits, state has {s.num_qubits} qubits")
    mask = o.truth_table()
    o.call_count += 1
    return StateVector(s.num_qubits, np.where(mask, -s.amplitudes, s.amplitudes))


def diffusion(s: StateVector) -> StateVector:
    """Reflect about the uniform superposition: ``a -> 2 * mean(a) - a``."""
    amps = s.amplitudes
    return StateVector(s.num_qubits, 2 * amps.mean() - amps)


def diffusion_matrix(n: int) -> np.ndarray:
    dim = 1 << n
    return np.full((dim, dim), 2 / dim) - np.eye(dim)


def _check_solution_count(n: int, M: int) -> None:
    if not 1 <= M < (1 << n):
        raise DomainError(f"solution count {M} outside [1, {(1 << n) - 1}]")


def grover_iterations(n: int, M: int) -> int:
    """``floor(pi/4 * sqrt(2**n / M))``, at least 1."""
    _check_solution_count(n, M)
    return max(1, math.floor(math.pi / 4 * math.sqrt((1 << n) / M)))


def classical_expected_draws(n: int, M: int) -> float:
    """Expected queries of random sampling without replacement until a hit."""
    return ((1 << n) + 1) / (M + 1)


@dataclass(frozen=True)
class GroverResult:
    found: int
    iterations: int
    oracle_calls: int
    success: bool


def grover_search(o: PredicateOracle, M: int, rng: RandomSource) -> GroverResult:
    n = o.num_bits
    _check_solution_count(n, M)
    k = grover_iterations(n, M)
    start_calls = o.call_count
    s = uniform_superposition(n)
    for _ in range(k):
        s = diffusion(oracle_phase_flip(s, o))
    found, _ = measure_all(s, rng)
    success = bool(o.query(found))
    return GroverResult(found, k, o.call_count - start_calls, success)


def grover_success_curve(n: int, M: int, k_max: int, solutions=None) -> list[float]:
    """Exact success probability after 0..k_max rounds, by simulation.

    The marked set defaults to ``{0, ..., M-1}``; the curve depends only on M.
    """
    if n > FULL_SIMULATION_MAX_QUBITS:
        raise DomainError(f"success curve simulated up to {FULL_SIMULATION_MAX_QUBITS} qubits, got {n}")
    _check_solution_count(n, M)
    if solutions is None:
        solutions = range(M)
    o = PredicateOracle.from_solutions(n, solutions)
    if o.count_solutions() != M:
        raise DomainError(f"{o.count_solutions()} solutions given, M = {M}")
    mask = o.truth_table()
    s = uniform_superposition(n)
    curve = [float(s.probabilities()[mask].sum())]
    for _ in range(k_max):
        s = diffusion(oracle_phase_flip(s, o))
        curve.append(float(s.probabilities()[mask].sum()))
    return curve
