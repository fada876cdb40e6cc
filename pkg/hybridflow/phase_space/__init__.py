"""Joint classical/quantum state space"""

from hybridflow.phase_space.operations import (
    as_amplitudes,
    constraint_value,
    decode_state,
    encode_state,
    overlap_probability,
    phase_rotate,
    random_state,
    state_from_dict,
    state_to_dict,
)
from hybridflow.phase_space.state import (
    DEFAULT_CONSTRAINT_TOL,
    BasisKind,
    BasisSet,
    ClassicalPoint,
    HybridPoint,
    QuantumPhasePoint,
)

__all__ = [
    "DEFAULT_CONSTRAINT_TOL",
    "BasisKind",
    "BasisSet",
    "ClassicalPoint",
    "HybridPoint",
    "QuantumPhasePoint",
    "as_amplitudes",
    "constraint_value",
    "decode_state",
    "encode_state",
    "overlap_probability",
    "phase_rotate",
    "random_state",
    "state_from_dict",
    "state_to_dict",
]
