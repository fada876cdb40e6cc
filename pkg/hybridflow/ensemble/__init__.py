"""Hybrid densities and their Liouville propagation"""

from hybridflow.ensemble.density import (
    DensityComponent,
    DensitySpec,
    FactorComponent,
    MatrixDensity,
    SeparableRecipe,
    SeparableTerm,
    check_normalization,
    density_value,
    normalization,
    normalization_tolerance,
    phase_space_rule,
    separable_density,
    separable_density_direct,
)
from hybridflow.ensemble.liouville import (
    EnsembleRun,
    PositivityReport,
    liouville_propagate,
    positivity_normalization_report,
)
from hybridflow.ensemble.sampling import GaussianProposal, Sample, SamplerSpec, draw_samples

__all__ = [
    "DensityComponent",
    "DensitySpec",
    "EnsembleRun",
    "FactorComponent",
    "GaussianProposal",
    "MatrixDensity",
    "PositivityReport",
    "Sample",
    "SamplerSpec",
    "SeparableRecipe",
    "SeparableTerm",
    "check_normalization",
    "density_value",
    "draw_samples",
    "liouville_propagate",
    "normalization",
    "normalization_tolerance",
    "phase_space_rule",
    "positivity_normalization_report",
    "separable_density",
    "separable_density_direct",
]
