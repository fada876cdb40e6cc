"""Classical, quantum, hybrid and almost-classical observables"""

from hybridflow.observables.almost_classical import (
    AlmostClassicalObservable,
    AlmostClassicalTerm,
    evaluate_almost_classical,
    monomial_key,
)
from hybridflow.observables.classical import (
    ClassicalObservable,
    add_classical,
    classical_symbols,
    parse_expression,
    scale_classical,
)
from hybridflow.observables.hybrid import (
    HybridObservable,
    PhaseGradient,
    combine,
    evaluate_hybrid,
)
from hybridflow.observables.operators import (
    lowering_operator,
    oscillator_hamiltonian,
    position_momentum_matrices,
    weyl_symmetrize,
)
from hybridflow.observables.quadratic import (
    HermitianMatrix,
    QuadraticObservable,
    expectation,
    quadratic_gradient,
)

__all__ = [
    "AlmostClassicalObservable",
    "AlmostClassicalTerm",
    "ClassicalObservable",
    "HermitianMatrix",
    "HybridObservable",
    "PhaseGradient",
    "QuadraticObservable",
    "add_classical",
    "classical_symbols",
    "combine",
    "evaluate_almost_classical",
    "evaluate_hybrid",
    "expectation",
    "lowering_operator",
    "monomial_key",
    "oscillator_hamiltonian",
    "parse_expression",
    "position_momentum_matrices",
    "quadratic_gradient",
    "scale_classical",
    "weyl_symmetrize",
]
