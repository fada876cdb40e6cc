"""hybridflow - Hamiltonian dynamics of coupled quantum-classical systems"""

__version__ = "0.1.0"
__author__ = "hybridflow team"

from hybridflow.dynamics.flow import Trajectory, flow_step, trajectory
from hybridflow.dynamics.model import ModelSpec, total_hamiltonian
from hybridflow.phase_space.state import BasisSet, ClassicalPoint, HybridPoint, QuantumPhasePoint

__all__ = [
    "BasisSet",
    "ClassicalPoint",
    "HybridPoint",
    "ModelSpec",
    "QuantumPhasePoint",
    "Trajectory",
    "flow_step",
    "total_hamiltonian",
    "trajectory",
]
