"""Bilinear oscillators with the interaction localized at the classical positions

The interaction is I = sum_k lam_k x_k^2 |Psi(x_k)|^2, i.e. the matrix
M(x)_ij = sum_k lam_k x_k^2 Phi_i(x_k) Phi_j(x_k) in the Hermite basis. The
factor lam_k carries units of energy per length squared.
"""

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from hybridflow.dynamics.model import ModelSpec
from hybridflow.models.bilinear import BilinearParams, classical_oscillators
from hybridflow.models.hermite import (
    ORTHONORMALITY_TOL,
    gauss_hermite_rule,
    hermite_derivatives,
    hermite_functions,
    orthonormality_defect,
)
from hybridflow.observables.hybrid import HybridObservable
from hybridflow.observables.operators import oscillator_hamiltonian, position_momentum_matrices
from hybridflow.phase_space.state import BasisSet, HybridPoint
from hybridflow.utils.logger import get_logger

logger = get_logger(__name__)


class LocalizedRangeWarning(UserWarning):
    """Interaction evaluated beyond the range its quadrature was validated for"""


@dataclass(frozen=True)
class LocalizedParams(BilinearParams):
    """Bilinear parameters plus the position-space quadrature

    ``nodes`` defaults to N + 20. The validated range is
    ``range_multiplier`` times the outermost classical turning point
    sqrt(2N + 1) / sqrt(M Omega).
    """

    nodes: Optional[int] = None
    range_multiplier: float = 1.5

    def __post_init__(self):
        super().__post_init__()
        if self.nodes is None:
            object.__setattr__(self, "nodes", self.N + 20)
        if self.nodes < self.N:  # type: ignore[operator]
            raise ValueError(f"Quadrature needs at least N = {self.N} nodes, got {self.nodes}")
        if self.range_multiplier <= 0:
            raise ValueError("Quadrature range multiplier must be positive")

    @property
    def validated_range(self) -> float:
        return self.range_multiplier * np.sqrt(2.0 * self.N + 1.0) / np.sqrt(self.M * self.Omega)


@dataclass(frozen=True)
class LocalizedValue:
    """Interaction value with an out-of-range warning, if any"""

    value: float
    warning: Optional[str] = None


def _range_warning(params: LocalizedParams, x: np.ndarray) -> Optional[str]:
    limit = params.validated_range
    outside = np.abs(x) > limit
    if not np.any(outside):
        return None
    return (
        f"Localized interaction evaluated at |x| = {float(np.max(np.abs(x))):.3f} "
        f"outside the validated range {limit:.3f}"
    )


def localized_interaction(params: LocalizedParams) -> HybridObservable:
    """HybridObservable for M(x)_ij with analytic x-derivatives"""
    lam = np.array(params.lam)
    N, n, M, Omega = params.N, params.n, params.M, params.Omega
    limit = params.validated_range
    # Fixed text, so the default warnings filter reports it once per call site
    message = f"Localized interaction evaluated outside the validated range |x| <= {limit:.3f}"

    def matrix(x, p):
        if np.any(np.abs(x) > limit):
            warnings.warn(message, LocalizedRangeWarning, stacklevel=2)
        F = hermite_functions(N, x, M, Omega)
        return (F * (lam * x * x)) @ F.T

    def dM_dx(x, p):
        F, dF = hermite_derivatives(N, x, M, Omega)
        out = np.empty((n, N, N))
        for k in range(n):
            f, df = F[:, k], dF[:, k]
            cross = np.outer(df, f)
            out[k] = lam[k] * (2.0 * x[k] * np.outer(f, f) + x[k] ** 2 * (cross + cross.T))
        return out

    def dM_dp(x, p):
        return np.zeros((n, N, N))

    return HybridObservable(
        n=n,
        N=N,
        matrix_fn=matrix,
        dM_dx=dM_dx,
        dM_dp=dM_dp,
        name="sum_k lam_k x_k^2 |Psi(x_k)|^2",
    )


def build_localized_bilinear(params: LocalizedParams) -> ModelSpec:
    """Bilinear oscillators with the localized interaction"""
    defect = orthonormality_defect(params.N, params.nodes, params.M, params.Omega)  # type: ignore
    if defect > ORTHONORMALITY_TOL:
        raise ValueError(
            f"Quadrature with {params.nodes} nodes does not resolve the first {params.N} "
            f"Hermite functions: orthonormality defect {defect:.3e}"
        )
    basis = params.basis
    model = ModelSpec(
        H_cl=classical_oscillators(params),
        H_qm=oscillator_hamiltonian(basis),
        I=localized_interaction(params),
        basis=basis,
        name="localized",
        params={"lam": list(params.lam), "N": params.N, "nodes": params.nodes},
    )
    logger.info(
        f"Built localized model: n = {params.n}, N = {params.N}, "
        f"quadrature defect {defect:.1e}"
    )
    return model


def evaluate_localized(
    params: LocalizedParams, model: ModelSpec, h: HybridPoint
) -> LocalizedValue:
    """Interaction value at h, with a warning outside the validated range"""
    return LocalizedValue(model.I.value(h), _range_warning(params, h.cl.x))


def position_matrix_element_oracle(basis: BasisSet, nodes: Optional[int] = None) -> float:
    """max |<Phi_i|q|Phi_j>_quadrature - X_ij| against the ladder-operator matrix"""
    nodes = nodes or basis.N + 20
    q, w = gauss_hermite_rule(nodes, basis.mass, basis.frequency)
    F = hermite_functions(basis.N, q, basis.mass, basis.frequency)
    quadrature = (F * (w * q)) @ F.T
    X, _ = position_momentum_matrices(basis)
    return float(np.max(np.abs(quadrature - X.entries)))
