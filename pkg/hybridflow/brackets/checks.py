"""Seeded property checks of the bracket structure"""

from typing import Any, Dict, List

import numpy as np
import sympy as sp

from hybridflow.brackets.closure import bracket_closure
from hybridflow.brackets.poisson import (
    commutator_residual,
    hybrid_bracket,
    jacobi_residual,
    quantum_bracket,
)
from hybridflow.observables.almost_classical import AlmostClassicalObservable, AlmostClassicalTerm
from hybridflow.observables.classical import ClassicalObservable, classical_symbols
from hybridflow.observables.quadratic import HermitianMatrix
from hybridflow.phase_space.operations import random_state
from hybridflow.phase_space.state import ClassicalPoint, HybridPoint
from hybridflow.utils.logger import get_logger

logger = get_logger(__name__)

COMMUTATOR_TOL = 1e-10
JACOBI_TOL = 1e-9
ANTISYMMETRY_TOL = 1e-12
CLOSURE_TOL = 1e-6
CONSTRAINT_TOL = 1e-10


def random_hermitian(N: int, rng: np.random.Generator) -> HermitianMatrix:
    """Hermitian matrix with standard complex Gaussian entries"""
    A = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    return HermitianMatrix(0.5 * (A + A.conj().T))


def random_hybrid_point(n: int, N: int, rng: np.random.Generator) -> HybridPoint:
    return HybridPoint(
        ClassicalPoint(rng.standard_normal(n), rng.standard_normal(n)), random_state(N, rng)
    )


def _random_coefficient(n: int, rng: np.random.Generator) -> sp.Expr:
    """Random polynomial of degree <= 2 in the classical coordinates"""
    xs, ps = classical_symbols(n)
    k = int(rng.integers(n))
    monomials = [sp.Integer(1), xs[k], ps[k], xs[k] * ps[k], xs[k] ** 2, ps[k] ** 2]
    weights = np.round(rng.standard_normal(len(monomials)), 3)
    return sum((sp.Float(float(w), 6) * m for w, m in zip(weights, monomials)), sp.Integer(0))


def random_almost_classical(
    n: int, N: int, rng: np.random.Generator, max_terms: int = 2, max_pairs: int = 2
) -> AlmostClassicalObservable:
    """Random almost-classical observable with polynomial coefficients"""
    terms = []
    for _ in range(int(rng.integers(1, max_terms + 1))):
        coeff = ClassicalObservable.from_expression(_random_coefficient(n, rng), n)
        n_pairs = int(rng.integers(1, max_pairs + 1))
        pairs = tuple((int(rng.integers(N)), int(rng.integers(N))) for _ in range(n_pairs))
        factor = complex(rng.standard_normal(), rng.standard_normal())
        terms.append(AlmostClassicalTerm(coeff, pairs, factor))
    return AlmostClassicalObservable(n, N, tuple(terms))


def commutator_check(seed: int, N: int, pairs: int) -> Dict[str, Any]:
    """Bracket/commutator equivalence, antisymmetry and Jacobi identity on random inputs"""
    rng = np.random.default_rng(seed)
    max_residual = max_antisymmetry = max_jacobi = 0.0
    for _ in range(pairs):
        F, G, K = (random_hermitian(N, rng) for _ in range(3))
        q = random_state(N, rng)
        max_residual = max(max_residual, commutator_residual(F, G, q))
        forward, backward = quantum_bracket(F, G, q), quantum_bracket(G, F, q)
        max_antisymmetry = max(max_antisymmetry, abs(forward + backward) / max(1.0, abs(forward)))
        max_jacobi = max(max_jacobi, jacobi_residual(F, G, K, q))
    passed = (
        max_residual <= COMMUTATOR_TOL
        and max_antisymmetry <= ANTISYMMETRY_TOL
        and max_jacobi <= JACOBI_TOL
    )
    logger.info(f"Commutator check: max residual {max_residual:.3e} over {pairs} pairs, N = {N}")
    return {
        "seed": seed,
        "N": N,
        "pairs": pairs,
        "max_commutator_residual": max_residual,
        "max_antisymmetry_residual": max_antisymmetry,
        "max_jacobi_residual": max_jacobi,
        "passed": bool(passed),
    }


def closure_check(seed: int, n: int, N: int, pairs: int, points: int) -> Dict[str, Any]:
    """Symbolic closure against the numeric hybrid bracket at random points"""
    rng = np.random.default_rng(seed)
    constraint = AlmostClassicalObservable.constraint(n, N)
    max_deviation = max_constraint = 0.0
    term_counts: List[int] = []
    for _ in range(pairs):
        A = random_almost_classical(n, N, rng)
        B = random_almost_classical(n, N, rng)
        closed = bracket_closure(A, B)
        term_counts.append(closed.term_count)
        for _ in range(points):
            h = random_hybrid_point(n, N, rng)
            numeric = hybrid_bracket(A, B, h).value
            scale = max(1.0, abs(numeric))
            max_deviation = max(max_deviation, abs(closed.value(h) - numeric) / scale)
            for G in (A, B):
                max_constraint = max(max_constraint, abs(hybrid_bracket(constraint, G, h).value))
    passed = max_deviation <= CLOSURE_TOL and max_constraint <= CONSTRAINT_TOL
    logger.info(
        f"Closure check: max deviation {max_deviation:.3e}, "
        f"max constraint bracket {max_constraint:.3e}"
    )
    return {
        "seed": seed,
        "n": n,
        "N": N,
        "pairs": pairs,
        "points": points,
        "max_closure_deviation": max_deviation,
        "max_constraint_bracket": max_constraint,
        "term_counts": term_counts,
        "passed": bool(passed),
    }
