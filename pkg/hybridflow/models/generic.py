"""Generic hybrid models from potentials and interaction recipes"""

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
import sympy as sp

from hybridflow.dynamics.model import ModelSpec
from hybridflow.models.hermite import gauss_hermite_rule, hermite_derivatives
from hybridflow.observables.classical import (
    ClassicalObservable,
    classical_symbols,
    parse_expression,
)
from hybridflow.observables.hybrid import HybridObservable
from hybridflow.observables.operators import position_momentum_matrices, weyl_symmetrize
from hybridflow.observables.quadratic import HermitianMatrix
from hybridflow.phase_space.state import BasisKind, BasisSet
from hybridflow.utils.errors import DimensionMismatchError, UnsupportedError
from hybridflow.utils.logger import get_logger

logger = get_logger(__name__)

POSITION = sp.Symbol("q", real=True)
EXTRA_NODES = 40


def classical_hamiltonian(potential: Union[str, sp.Expr], n: int) -> ClassicalObservable:
    """sum_k p_k^2 / 2 + v(x) with unit masses"""
    _, ps = classical_symbols(n)
    kinetic = sum((p**2 / 2 for p in ps), sp.Integer(0))
    return ClassicalObservable.from_expression(kinetic + parse_expression(potential, n), n, "H_cl")


def quantum_hamiltonian(
    basis: BasisSet, potential: Union[str, sp.Expr], nodes: Optional[int] = None
) -> HermitianMatrix:
    """Galerkin matrix of P^2 / 2M + V(q) in the Hermite basis

    ``potential`` is an expression in the position symbol ``q``. Matrix elements
    are Gauss-Hermite quadratures, exact for polynomial V of degree below
    2 * (nodes - N) + 2.
    """
    if basis.kind != BasisKind.HARMONIC:
        raise UnsupportedError("Potential-based quantum Hamiltonians need a Hermite basis")
    V = sp.sympify(potential, locals={"q": POSITION})
    unknown = V.free_symbols - {POSITION}
    if unknown:
        raise ValueError(f"Quantum potential may only use q, got {sorted(map(str, unknown))}")
    N, mass, frequency = basis.N, basis.mass, basis.frequency
    q, w = gauss_hermite_rule(nodes or N + EXTRA_NODES, mass, frequency)
    phi, dphi = hermite_derivatives(N, q, mass, frequency)
    v = np.broadcast_to(np.asarray(sp.lambdify(POSITION, V, "numpy")(q), dtype=float), q.shape)
    kinetic = (dphi * w) @ dphi.T / (2.0 * mass)
    potential_matrix = (phi * (w * v)) @ phi.T
    return HermitianMatrix(kinetic + potential_matrix)


@dataclass(frozen=True)
class InteractionTerm:
    """coefficient(x, p) times the Weyl-ordered operator word in X and P"""

    coefficient: ClassicalObservable
    word: str


def interaction_from_recipe(
    terms: Sequence[InteractionTerm], basis: BasisSet, n: int
) -> HybridObservable:
    """Sum of coefficient * Weyl(word) couplings"""
    X, P = position_momentum_matrices(basis)
    interaction = HybridObservable.zero(n, basis.N)
    for term in terms:
        G = HermitianMatrix(weyl_symmetrize(term.word, X.entries, P.entries))
        interaction = interaction + HybridObservable.coupling(
            term.coefficient, G, name=f"({term.coefficient.name}) * W[{term.word}]"
        )
    return interaction


def build_generic(
    H_cl: ClassicalObservable,
    H_qm: HermitianMatrix,
    I: Union[HybridObservable, Sequence[InteractionTerm], None] = None,
    basis: Optional[BasisSet] = None,
    name: str = "generic",
) -> ModelSpec:
    """Assemble a ModelSpec; an interaction recipe is Weyl-symmetrized"""
    basis = basis or BasisSet.abstract(H_qm.N)
    if basis.N != H_qm.N:
        raise DimensionMismatchError("basis dimension", H_qm.N, basis.N)
    if I is None:
        interaction = HybridObservable.zero(H_cl.n, H_qm.N)
    elif isinstance(I, HybridObservable):
        interaction = I
    else:
        interaction = interaction_from_recipe(I, basis, H_cl.n)
    model = ModelSpec(H_cl=H_cl, H_qm=H_qm, I=interaction, basis=basis, name=name)
    if interaction.has_matrix:
        # Hermiticity of the assembled interaction at a reference point
        interaction.matrix(np.zeros(H_cl.n), np.zeros(H_cl.n))
    logger.info(f"Built generic model {name!r}: n = {H_cl.n}, N = {H_qm.N}")
    return model
