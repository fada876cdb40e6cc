"""Hybrid equations of motion, canonical transformations and trajectories"""

from hybridflow.dynamics.canonical import canonical_step, unitary_oracle
from hybridflow.dynamics.flow import (
    Trajectory,
    flow_step,
    reference_solution,
    renormalize,
    symplecticity_defect,
    trajectory,
)
from hybridflow.dynamics.integrator import Method, cayley_step, vector_field
from hybridflow.dynamics.model import ModelSpec, total_hamiltonian
from hybridflow.dynamics.tangibility import Perturbation, TangibilityReport, tangibility_experiment

__all__ = [
    "Method",
    "ModelSpec",
    "Perturbation",
    "TangibilityReport",
    "Trajectory",
    "canonical_step",
    "cayley_step",
    "flow_step",
    "reference_solution",
    "renormalize",
    "symplecticity_defect",
    "tangibility_experiment",
    "total_hamiltonian",
    "trajectory",
    "unitary_oracle",
    "vector_field",
]
