"""Classical, quantum and generalized hybrid Poisson brackets"""

from hybridflow.brackets.checks import (
    closure_check,
    commutator_check,
    random_almost_classical,
    random_hermitian,
    random_hybrid_point,
)
from hybridflow.brackets.closure import bracket_closure
from hybridflow.brackets.poisson import (
    BracketResult,
    classical_bracket,
    commutator_matrix,
    commutator_residual,
    finite_difference_bracket,
    gradient_bracket,
    hybrid_bracket,
    jacobi_residual,
    quantum_bracket,
)

__all__ = [
    "BracketResult",
    "bracket_closure",
    "classical_bracket",
    "closure_check",
    "commutator_check",
    "commutator_matrix",
    "commutator_residual",
    "finite_difference_bracket",
    "gradient_bracket",
    "hybrid_bracket",
    "jacobi_residual",
    "quantum_bracket",
    "random_almost_classical",
    "random_hermitian",
    "random_hybrid_point",
]
