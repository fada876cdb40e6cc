"""Built-in hybrid Hamiltonians"""

from hybridflow.models.bilinear import (
    BilinearParams,
    build_bilinear,
    check_truncation,
    classical_oscillators,
    closed_set_series,
    coherent_state,
    ehrenfest_matrix,
    ehrenfest_reference,
    fit_normal_modes,
    normal_mode_frequencies,
    truncation_occupation,
)
from hybridflow.models.generic import (
    InteractionTerm,
    build_generic,
    classical_hamiltonian,
    interaction_from_recipe,
    quantum_hamiltonian,
)
from hybridflow.models.hermite import (
    gauss_hermite_rule,
    hermite_derivatives,
    hermite_eval,
    hermite_functions,
    orthonormality_defect,
    overlap_matrix,
)
from hybridflow.models.localized import (
    LocalizedParams,
    LocalizedRangeWarning,
    LocalizedValue,
    build_localized_bilinear,
    evaluate_localized,
    localized_interaction,
    position_matrix_element_oracle,
)

__all__ = [
    "BilinearParams",
    "InteractionTerm",
    "LocalizedParams",
    "LocalizedRangeWarning",
    "LocalizedValue",
    "build_bilinear",
    "build_generic",
    "build_localized_bilinear",
    "check_truncation",
    "classical_hamiltonian",
    "classical_oscillators",
    "closed_set_series",
    "coherent_state",
    "ehrenfest_matrix",
    "ehrenfest_reference",
    "evaluate_localized",
    "fit_normal_modes",
    "gauss_hermite_rule",
    "hermite_derivatives",
    "hermite_eval",
    "hermite_functions",
    "interaction_from_recipe",
    "localized_interaction",
    "normal_mode_frequencies",
    "orthonormality_defect",
    "overlap_matrix",
    "position_matrix_element_oracle",
    "quantum_hamiltonian",
    "truncation_occupation",
]
