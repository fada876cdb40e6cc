"""Library objects from validated configuration blocks"""

from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from hybridflow.dynamics.model import ModelSpec
from hybridflow.dynamics.tangibility import Perturbation
from hybridflow.ensemble.density import DensityComponent, DensitySpec
from hybridflow.ensemble.sampling import GaussianProposal, SamplerSpec
from hybridflow.models.bilinear import (
    BilinearParams,
    build_bilinear,
    check_truncation,
    coherent_state,
)
from hybridflow.models.generic import (
    InteractionTerm,
    build_generic,
    classical_hamiltonian,
    quantum_hamiltonian,
)
from hybridflow.models.localized import LocalizedParams, build_localized_bilinear
from hybridflow.observables.classical import ClassicalObservable
from hybridflow.observables.hybrid import HybridObservable
from hybridflow.observables.operators import position_momentum_matrices, weyl_symmetrize
from hybridflow.observables.quadratic import HermitianMatrix
from hybridflow.phase_space.operations import as_amplitudes, encode_state
from hybridflow.phase_space.state import (
    BasisKind,
    BasisSet,
    ClassicalPoint,
    HybridPoint,
    QuantumPhasePoint,
)
from hybridflow.utils.logger import get_logger

logger = get_logger(__name__)


def _bilinear_kwargs(block: Dict[str, Any]) -> Dict[str, Any]:
    keys = ("m", "omega", "M", "Omega", "lam", "N")
    return {key: block[key] for key in keys if key in block}


def build_params(block: Dict[str, Any]) -> BilinearParams:
    """Bilinear or localized parameters of a model block"""
    if block.get("kind") == "localized":
        quadrature = block.get("quadrature") or {}
        return LocalizedParams(
            **_bilinear_kwargs(block),
            nodes=quadrature.get("nodes"),
            range_multiplier=quadrature.get("range_multiplier", 1.5),
        )
    return BilinearParams(**_bilinear_kwargs(block))


def _generic_basis(block: Dict[str, Any]) -> BasisSet:
    if block.get("basis", "abstract") == "harmonic":
        return BasisSet.harmonic(block["N"], block.get("M", 1.0), block.get("Omega", 1.0))
    return BasisSet.abstract(block["N"])


def build_generic_model(block: Dict[str, Any]) -> ModelSpec:
    n = block["n"]
    basis = _generic_basis(block)
    H_cl = classical_hamiltonian(str(block.get("classical_potential", 0)), n)
    if "quantum_potential" in block:
        H_qm = quantum_hamiltonian(basis, str(block["quantum_potential"]))
    elif "H_qm" in block:
        H_qm = HermitianMatrix.from_rows(block["H_qm"])
    else:
        H_qm = HermitianMatrix.zeros(basis.N)
    terms = [
        InteractionTerm(
            ClassicalObservable.from_expression(str(term["coefficient"]), n),
            str(term["word"]),
        )
        for term in block.get("interaction") or []
    ]
    return build_generic(H_cl, H_qm, terms or None, basis=basis)


def build_model(block: Dict[str, Any]) -> Tuple[ModelSpec, Optional[BilinearParams]]:
    """Model and, for the oscillator families, its parameters"""
    kind = block["kind"]
    if kind == "generic":
        return build_generic_model(block), None
    params = build_params(block)
    if isinstance(params, LocalizedParams):
        return build_localized_bilinear(params), params
    return build_bilinear(params), params


def initial_amplitudes(block: Dict[str, Any], N: int) -> np.ndarray:
    """Quantum amplitudes of an initial_state block; the ground state by default"""
    if "amplitudes" in block:
        return as_amplitudes(block["amplitudes"])
    if "coherent" in block:
        alpha = as_amplitudes([block["coherent"]])[0]
        return coherent_state(alpha, N)
    c = np.zeros(N, dtype=complex)
    c[0] = 1.0
    return c


def build_initial_state(block: Dict[str, Any], model: ModelSpec) -> HybridPoint:
    """Hybrid point of an initial_state block, with a truncation check on Hermite bases"""
    n, N = model.n, model.N
    cl = ClassicalPoint(block.get("x", [0.0] * n), block.get("p", [0.0] * n))
    if "X" in block:
        qm = QuantumPhasePoint(block["X"], block["P"])
        c = (qm.X + 1j * qm.P) / np.sqrt(2.0)
    else:
        c = initial_amplitudes(block, N)
        qm = encode_state(c)
    if model.basis is not None and model.basis.kind == BasisKind.HARMONIC:
        check_truncation(c)
    return HybridPoint(cl, qm)


def build_perturbation(block: Dict[str, Any]) -> Perturbation:
    """Perturbation profile; the configured index is 1-based"""
    factory = Perturbation.bump if block.get("profile") == "bump" else Perturbation.smooth_step
    return factory(
        float(block["t0"]),
        int(block.get("index", 1)) - 1,
        block.get("kind", "x"),
        float(block.get("amplitude", 0.0)),
        float(block.get("width", 1.0)),
    )


def build_density(block: Dict[str, Any], n: int) -> DensitySpec:
    return DensitySpec(
        tuple(
            DensityComponent(
                ClassicalObservable.from_expression(str(comp["weight"]), n, f"w_{j + 1}"),
                as_amplitudes(comp["state"]),
            )
            for j, comp in enumerate(block["components"])
        )
    )


def _per_coordinate(value: Any, n: int, default: float) -> Sequence[float]:
    if value is None:
        return [default] * n
    if isinstance(value, (int, float)):
        return [float(value)] * n
    return [float(v) for v in value]


def build_sampler(block: Dict[str, Any], n: int, seed: int) -> SamplerSpec:
    proposal = block.get("proposal") or {}
    return SamplerSpec(
        samples=int(block["samples"]),
        seed=seed,
        proposal=GaussianProposal(
            _per_coordinate(proposal.get("mean_x"), n, 0.0),
            _per_coordinate(proposal.get("mean_p"), n, 0.0),
            _per_coordinate(proposal.get("width_x"), n, 1.0),
            _per_coordinate(proposal.get("width_p"), n, 1.0),
        ),
    )


def build_observable(
    block: Dict[str, Any], model: ModelSpec, default_name: str = "observable"
) -> HybridObservable:
    """One ensemble observable: classical expression, operator word or matrix"""
    n, N = model.n, model.N
    name = str(block.get("name") or default_name)
    if "classical" in block:
        obs = ClassicalObservable.from_expression(str(block["classical"]), n, name)
        return HybridObservable.from_classical(obs, N)
    if "matrix" in block:
        return HybridObservable.from_quadratic(HermitianMatrix.from_rows(block["matrix"]), n, name)
    X, P = position_momentum_matrices(model.basis)
    G = HermitianMatrix(weyl_symmetrize(str(block["operator"]), X.entries, P.entries))
    if "coefficient" in block:
        coeff = ClassicalObservable.from_expression(str(block["coefficient"]), n)
        return HybridObservable.coupling(coeff, G, name=name)
    return HybridObservable.from_quadratic(G, n, name)


def build_observables(blocks: List[Dict[str, Any]], model: ModelSpec) -> List[HybridObservable]:
    return [
        build_observable(block, model, f"observable_{i + 1}") for i, block in enumerate(blocks)
    ]
