"""One- and two-qubit gates, their locality-structured action, and circuits.

A gate on targets ``(t0, t1)`` owns a 4x4 matrix whose local row/column index
is ``bit(t0) + 2 * bit(t1)``: the first listed target is the low bit of the
local index, matching the global convention that qubit 0 is the low bit.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .core_state import RandomSource, StateVector
from .errors import CircuitParseError, DomainError, ResourceError, StateCorruptionError, ValidationError

UNITARY_TOL = 1e-10
DENSE_MAX_QUBITS = 12


def validate_unitary(m, tol: float = UNITARY_TOL) -> bool:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {m.shape}")
    deviation = m.conj().T @ m - np.eye(m.shape[0])
    return bool(np.max(np.abs(deviation)) < tol)


def _check_targets(targets, n: int) -> None:
    for t in targets:
        if not 0 <= t < n:
            raise DomainError(f"target qubit {t} out of range for {n} qubits")


def apply_local_matrix(vec: np.ndarray, matrix: np.ndarray, targets, n: int) -> np.ndarray:
    """Act with a ``2**k x 2**k`` matrix on the ``targets`` bits of a length-``2**n`` vector.

    The vector is viewed as ``(hi, 2, mid, 2, lo)`` (or ``(hi, 2, lo)`` for
    one target), so each strided slice holds one value of the target bits
    across all ``2**(n-k)`` off-target groups. Output slice ``i`` is
    ``sum_j matrix[i, j] * slice_j`` accumulated in ascending ``j``, with
    zero entries skipped; diagonal matrices reduce to one broadcast
    multiply. Cost is O(2**n) and the dense matrix is never
    formed. Works for complex amplitudes and real probability vectors alike.
    """
    k = len(targets)
    _check_targets(targets, n)
    dtype = np.result_type(vec, matrix)
    if k == 1:
        view = vec.reshape(-1, 2, 1 << targets[0])
        keys = [(j,) for j in range(2)]
        pick = lambda a, key: a[:, key[0], :]
    else:
        lo, hi = sorted(targets)
        view = vec.reshape(-1, 2, 1 << (hi - lo - 1), 2, 1 << lo)
        # local index bit m belongs to targets[m]
        keys = []
        for j in range(4):
            bit = {targets[m]: (j >> m) & 1 for m in range(2)}
            keys.append((bit[hi], bit[lo]))
        pick = lambda a, key: a[:, key[0], :, key[1], :]
    if not np.any(matrix - np.diag(np.diag(matrix))):
        factors = np.zeros((2,) * k, dtype=dtype)
        for j, key in enumerate(keys):
            factors[key] = matrix[j, j]
        shape = (1, 2, 1) if k == 1 else (1, 2, 1, 2, 1)
        return (view * factors.reshape(shape)).reshape(-1)
    out = np.zeros(view.shape, dtype=dtype)
    slices = [pick(view, key) for key in keys]
    for i, row in enumerate(matrix):
        acc = pick(out, keys[i])
        for j, entry in enumerate(row):
            if entry != 0:
                acc += entry * slices[j]
    return out.reshape(-1)


def embed_dense(matrix: np.ndarray, targets, n: int) -> np.ndarray:
    """Full ``2**n x 2**n`` matrix of a local operator, by direct indexing.

    Entry ``(i, j)`` is ``matrix[local(i), local(j)]`` when ``i`` and ``j``
    agree on every bit outside ``targets`` and zero otherwise. This is the
    brute-force reference for :func:`apply_local_matrix`.
    """
    if n > DENSE_MAX_QUBITS:
        raise ResourceError(f"dense embedding limited to {DENSE_MAX_QUBITS} qubits, got {n}")
    _check_targets(targets, n)
    idx = np.arange(1 << n)
    local = np.zeros_like(idx)
    target_mask = 0
    for j, t in enumerate(targets):
        local |= ((idx >> t) & 1) << j
        target_mask |= 1 << t
    off = idx & ~target_mask
    same_off = off[:, None] == off[None, :]
    return np.where(same_off, matrix[local[:, None], local[None, :]], 0)


@dataclass(frozen=True)
class Gate:
    matrix: np.ndarray
    targets: tuple[int, ...]
    name: str = "U"

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        targets = tuple(int(t) for t in self.targets)
        k = len(targets)
        if k not in (1, 2):
            raise ValidationError(f"gate arity must be 1 or 2, got {k}")
        if len(set(targets)) != k:
            raise ValidationError(f"gate targets must be distinct, got {targets}")
        if any(t < 0 for t in targets):
            raise ValidationError(f"negative target in {targets}")
        if m.shape != (1 << k, 1 << k):
            raise ValidationError(f"{k}-qubit gate needs a {1 << k}x{1 << k} matrix, got {m.shape}")
        if not validate_unitary(m, UNITARY_TOL):
            raise ValidationError(f"gate {self.name} is not unitary within {UNITARY_TOL}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "targets", targets)

    @property
    def arity(self) -> int:
        return len(self.targets)

    def on(self, *targets: int) -> Gate:
        return Gate(self.matrix, targets, self.name)


def embed_gate_dense(g: Gate, n: int) -> np.ndarray:
    return embed_dense(g.matrix, g.targets, n)


def apply_gate(s: StateVector, g: Gate) -> StateVector:
    """Return ``U s`` for the gate embedded in the full register."""
    return StateVector(s.num_qubits, apply_local_matrix(s.amplitudes, g.matrix, g.targets, s.num_qubits))


def _apply_inplace(s: StateVector, g: Gate) -> None:
    s.amplitudes[:] = apply_local_matrix(s.amplitudes, g.matrix, g.targets, s.num_qubits)


@dataclass
class Circuit:
    num_qubits: int
    gates: list[Gate] = field(default_factory=list)

    def __post_init__(self):
        if self.num_qubits < 1:
            raise DomainError(f"circuit needs at least one qubit, got {self.num_qubits}")
        for g in self.gates:
            _check_targets(g.targets, self.num_qubits)

    def append(self, g: Gate) -> Circuit:
        _check_targets(g.targets, self.num_qubits)
        self.gates.append(g)
        return self

    def __len__(self):
        return len(self.gates)


def run_circuit(s: StateVector, c: Circuit) -> StateVector:
    if c.num_qubits != s.num_qubits:
        raise DomainError(f"circuit has {c.num_qubits} qubits, state has {s.num_qubits}")
    out = s.copy()
    for g in c.gates:
        _apply_inplace(out, g)
    return out


def measure_qubit(s: StateVector, q: int, rng: RandomSource) -> tuple[int, StateVector]:
    """Measure one qubit; the surviving branch is renormalised exactly."""
    _check_targets((q,), s.num_qubits)
    probs = s.probabilities()
    has_bit = ((np.arange(s.dim) >> q) & 1).astype(bool)
    p1 = float(probs[has_bit].sum())
    p0 = float(probs[~has_bit].sum())
    if p0 < 1e-12 and p1 < 1e-12:
        raise StateCorruptionError(f"both branches of qubit {q} have vanishing probability")
    bit = int(rng.random() * (p0 + p1) >= p0)
    keep = has_bit if bit else ~has_bit
    amps = np.where(keep, s.amplitudes, 0)
    amps /= math.sqrt(p1 if bit else p0)
    return bit, StateVector(s.num_qubits, amps)


_SQRT_HALF = 1 / math.sqrt(2)


def not_gate(q: int = 0) -> Gate:
    return Gate(np.array([[0, 1], [1, 0]]), (q,), "NOT")


def sqrt_not_gate(q: int = 0) -> Gate:
    """Rotation by pi/4; applying it twice gives NOT."""
    return Gate(np.array([[1, -1], [1, 1]]) * _SQRT_HALF, (q,), "SQRTNOT")


def hadamard(q: int = 0) -> Gate:
    return Gate(np.array([[1, 1], [1, -1]]) * _SQRT_HALF, (q,), "H")


def phase(theta: float, q: int = 0) -> Gate:
    return Gate(np.diag([1, cmath.exp(1j * theta)]), (q,), "PHASE")


def controlled_phase(theta: float, control: int = 0, target: int = 1) -> Gate:
    return Gate(np.diag([1, 1, 1, cmath.exp(1j * theta)]), (control, target), "CPHASE")


def controlled_not(control: int = 0, target: int = 1) -> Gate:
    # local index = bit(control) + 2 * bit(target): swap |c=1,t=0> (1) with |c=1,t=1> (3)
    m = np.array(
        [
            [1, 0, 0, 0],
            [0, 0, 0, 1],
            [0, 0, 1, 0],
            [0, 1, 0, 0],
        ]
    )
    return Gate(m, (control, target), "CNOT")


def swap_gates(a: int, b: int) -> list[Gate]:
    return [controlled_not(a, b), controlled_not(b, a), controlled_not(a, b)]


# Circuit text format: QUBITS n header, then one gate per line, '#' comments.
_MNEMONICS = {
    "NOT": (1, 0, lambda qs, _: not_gate(*qs)),
    "SQRTNOT": (1, 0, lambda qs, _: sqrt_not_gate(*qs)),
    "H": (1, 0, lambda qs, _: hadamard(*qs)),
    "PHASE": (1, 1, lambda qs, a: phase(a[0], *qs)),
    "CNOT": (2, 0, lambda qs, _: controlled_not(*qs)),
    "CPHASE": (2, 1, lambda qs, a: controlled_phase(a[0], *qs)),
}


def parse_circuit(text: str) -> Circuit:
    circuit = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        op = words[0].upper()
        if circuit is None:
            if op != "QUBITS" or len(words) != 2:
                raise CircuitParseError(lineno, f"expected 'QUBITS n', got {raw.strip()!r}")
            try:
                n = int(words[1])
            except ValueError:
                raise CircuitParseError(lineno, f"bad qubit count {words[1]!r}") from None
            if n < 1:
                raise CircuitParseError(lineno, f"qubit count must be positive, got {n}")
            circuit = Circuit(n)
            continue
        if op not in _MNEMONICS:
            raise CircuitParseError(lineno, f"unknown gate {words[0]!r}")
        nq, nargs, build = _MNEMONICS[op]
        if len(words) != 1 + nq + nargs:
            raise CircuitParseError(lineno, f"{op} takes {nq} qubit(s) and {nargs} angle(s)")
        try:
            qubits = [int(w) for w in words[1 : 1 + nq]]
            angles = [float(w) for w in words[1 + nq :]]
        except ValueError as exc:
            raise CircuitParseError(lineno, str(exc)) from None
        for q in qubits:
            if not 0 <= q < circuit.num_qubits:
                raise CircuitParseError(lineno, f"qubit {q} out of range for {circuit.num_qubits} qubits")
        try:
            circuit.append(build(qubits, angles))
        except ValidationError as exc:
            raise CircuitParseError(lineno, str(exc)) from None
    if circuit is None:
        raise CircuitParseError(0, "missing 'QUBITS n' header")
    return circuit

