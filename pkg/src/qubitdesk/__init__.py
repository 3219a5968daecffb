"""Desk-scale state-vector quantum simulation.

Qubit 0 is the least-significant bit of every basis index.
"""

from .core_state import (
    StateVector,
    l2_norm,
    measure_all,
    new_basis_state,
    probability_of,
    random_source,
    sample_outcomes,
    uniform_superposition,
)
from .errors import (
    CircuitParseError,
    DomainError,
    QubitDeskError,
    RecoveryError,
    ResourceError,
    StateCorruptionError,
    ValidationError,
)
from .gates import (
    Circuit,
    Gate,
    apply_gate,
    controlled_not,
    controlled_phase,
    embed_gate_dense,
    hadamard,
    measure_qubit,
    not_gate,
    parse_circuit,
    phase,
    run_circuit,
    sqrt_not_gate,
    validate_unitary,
)

__version__ = "0.1.0"
