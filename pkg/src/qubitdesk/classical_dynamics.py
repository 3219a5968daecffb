"""Deterministic and randomized classical dynamics over 2**n bit strings.

Probability vectors live in the same index space as :class:`StateVector` and
local stochastic operators share the gate kernel, so the only differences
from the quantum track are the l1 norm and nonnegative real entries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core_state import StateVector, new_basis_state, probability_of
from .errors import DomainError, ValidationError
from .gates import Circuit, apply_local_matrix, embed_dense, run_circuit, sqrt_not_gate

STOCHASTIC_TOL = 1e-10
CLAMP_TOL = 1e-15


def _clamp(probs: np.ndarray) -> np.ndarray:
    worst = probs.min(initial=0.0)
    if worst < -CLAMP_TOL:
        raise ValidationError(f"negative probability {worst!r} beyond rounding noise")
    return np.where(probs < 0, 0.0, probs)


class ProbVector:
    __slots__ = ("num_bits", "probs")

    def __init__(self, num_bits: int, probs):
        if num_bits < 1:
            raise DomainError(f"need at least one bit, got {num_bits}")
        p = np.array(probs, dtype=np.float64).reshape(-1)
        if p.size != 1 << num_bits:
            raise DomainError(f"{num_bits} bits need {1 << num_bits} entries, got {p.size}")
        p = _clamp(p)
        if abs(p.sum() - 1.0) > STOCHASTIC_TOL:
            raise ValidationError(f"probabilities sum to {p.sum()!r}, not 1")
        self.num_bits = num_bits
        self.probs = p

    def l1_norm(self) -> float:
        return float(np.abs(self.probs).sum())

    def __repr__(self):
        return f"ProbVector(num_bits={self.num_bits})"


def point_mass(n: int, b: int) -> ProbVector:
    if not 0 <= b < (1 << n):
        raise DomainError(f"index {b} out of range for {n} bits")
    p = np.zeros(1 << n)
    p[b] = 1.0
    return ProbVector(n, p)


def uniform_distribution(n: int) -> ProbVector:
    return ProbVector(n, np.full(1 << n, 1.0 / (1 << n)))


def validate_deterministic(m) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {m.shape}")
    if not np.isin(m, (0, 1)).all():
        raise DomainError("deterministic matrices must have 0/1 entries")
    return bool((m.sum(axis=0) == 1).all())


def validate_stochastic(m, tol: float = STOCHASTIC_TOL) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {m.shape}")
    if np.iscomplexobj(m):
        if np.any(m.imag != 0):
            return False
        m = m.real
    return bool((m >= 0).all() and np.all(np.abs(m.sum(axis=0) - 1.0) < tol))


@dataclass(frozen=True)
class LocalStochasticOp:
    """Column-stochastic 2x2 or 4x4 matrix acting on ``targets``.

    Local index convention is the same as :class:`qubitdesk.gates.Gate`.
    Deterministic 0/1 maps are stored here too, as the special case.
    """

    matrix: np.ndarray
    targets: tuple[int, ...]

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.float64)
        targets = tuple(int(t) for t in self.targets)
        k = len(targets)
        if k not in (1, 2) or len(set(targets)) != k:
            raise ValidationError(f"need 1 or 2 distinct targets, got {targets}")
        if m.shape != (1 << k, 1 << k):
            raise ValidationError(f"{k}-bit op needs a {1 << k}x{1 << k} matrix, got {m.shape}")
        if not validate_stochastic(m):
            raise ValidationError("matrix is not column-stochastic")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "targets", targets)

    @property
    def arity(self) -> int:
        return len(self.targets)


def apply_local_stochastic(p: ProbVector, op: LocalStochasticOp) -> ProbVector:
    out = apply_local_matrix(p.probs, op.matrix, op.targets, p.num_bits)
    return ProbVector(p.num_bits, out)


def embed_stochastic_dense(op: LocalStochasticOp, n: int) -> np.ndarray:
    return embed_dense(op.matrix, op.targets, n)


def quantum_to_distribution(s: StateVector) -> ProbVector:
    return ProbVector(s.num_qubits, s.probabilities())


def fair_coin(b: int = 0) -> LocalStochasticOp:
    """The doubly-stochastic bit randomizer, classical stand-in for sqrt(NOT)."""
    return LocalStochasticOp(np.full((2, 2), 0.5), (b,))


def interference_contrast(steps: int = 2) -> dict:
    """P(outcome 1) after ``steps`` sqrt(NOT) vs ``steps`` fair-coin steps from 0."""
    s = run_circuit(new_basis_state(1, 0), Circuit(1, [sqrt_not_gate(0)] * steps))
    p = point_mass(1, 0)
    for _ in range(steps):
        p = apply_local_stochastic(p, fair_coin(0))
    quantum = probability_of(s, 1)
    classical = float(p.probs[1])
    return {"quantum_p1": quantum, "classical_p1": classical, "difference": abs(quantum - classical)}
