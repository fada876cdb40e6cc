"""Classical, quantum and hybrid Poisson brackets"""

from dataclasses import dataclass
from typing import Union

import numpy as np

from hybridflow.observables.almost_classical import AlmostClassicalObservable
from hybridflow.observables.classical import ClassicalObservable, central_gradient
from hybridflow.observables.hybrid import HybridObservable, PhaseGradient
from hybridflow.observables.quadratic import (
    HermitianMatrix,
    MatrixLike,
    as_hermitian,
    expectation,
    quadratic_gradient,
)
from hybridflow.phase_space.state import ClassicalPoint, HybridPoint, QuantumPhasePoint
from hybridflow.utils.errors import DimensionMismatchError

HybridField = Union[HybridObservable, AlmostClassicalObservable]


@dataclass(frozen=True)
class BracketResult:
    """Generalized bracket split into its classical and quantum sectors"""

    value: float
    classical_part: float
    quantum_part: float

    @classmethod
    def from_parts(cls, classical_part: float, quantum_part: float) -> "BracketResult":
        return cls(classical_part + quantum_part, classical_part, quantum_part)


def _pair_sum(fa: np.ndarray, gb: np.ndarray, fb: np.ndarray, ga: np.ndarray) -> float:
    """sum_k (fa_k gb_k - fb_k ga_k)"""
    return float(np.dot(fa, gb) - np.dot(fb, ga))


def gradient_bracket(a: PhaseGradient, b: PhaseGradient) -> BracketResult:
    """Bracket of two scalar fields from their gradients"""
    classical_part = _pair_sum(a.x, b.p, a.p, b.x)
    quantum_part = _pair_sum(a.X, b.P, a.P, b.X)
    return BracketResult.from_parts(classical_part, quantum_part)


def classical_bracket(f: ClassicalObservable, g: ClassicalObservable, pt: ClassicalPoint) -> float:
    """sum_k (df/dx_k dg/dp_k - df/dp_k dg/dx_k)"""
    for obs in (f, g):
        if obs.n != pt.n:
            raise DimensionMismatchError("classical observable", pt.n, obs.n)
    fx, fp = f.gradient(pt.x, pt.p)
    gx, gp = g.gradient(pt.x, pt.p)
    return _pair_sum(fx, gp, fp, gx)


def quantum_bracket(F: MatrixLike, G: MatrixLike, q: QuantumPhasePoint) -> float:
    """sum_i (dF/dX_i dG/dP_i - dF/dP_i dG/dX_i) for two quadratic forms"""
    for obs in (F, G):
        if as_hermitian(obs).N != q.N:
            raise DimensionMismatchError("quantum observable", q.N, as_hermitian(obs).N)
    FX, FP = quadratic_gradient(as_hermitian(F).entries, q.X, q.P)
    GX, GP = quadratic_gradient(as_hermitian(G).entries, q.X, q.P)
    return _pair_sum(FX, GP, FP, GX)


def hybrid_bracket(A: HybridField, B: HybridField, h: HybridPoint) -> BracketResult:
    """{A, B}_x = {A, B}_CL + {A, B}_QM"""
    return gradient_bracket(A.gradient(h), B.gradient(h))


def commutator_matrix(F: MatrixLike, G: MatrixLike) -> HermitianMatrix:
    """(1/i)[F, G], Hermitian for Hermitian F and G"""
    f, g = as_hermitian(F).entries, as_hermitian(G).entries
    return HermitianMatrix(-1j * (f @ g - g @ f))


def commutator_residual(F: MatrixLike, G: MatrixLike, q: QuantumPhasePoint) -> float:
    """|{F, G}_QM - <Psi|(1/i)[F, G]|Psi>|"""
    return abs(quantum_bracket(F, G, q) - expectation(commutator_matrix(F, G), q))


def jacobi_residual(F: MatrixLike, G: MatrixLike, K: MatrixLike, q: QuantumPhasePoint) -> float:
    """|{{F,G},K} + {{G,K},F} + {{K,F},G}| using the commutator form of inner brackets"""
    total = (
        quantum_bracket(commutator_matrix(F, G), K, q)
        + quantum_bracket(commutator_matrix(G, K), F, q)
        + quantum_bracket(commutator_matrix(K, F), G, q)
    )
    return abs(total)


def finite_difference_bracket(A: HybridField, B: HybridField, h: HybridPoint) -> BracketResult:
    """Bracket from central differences over all 2(n + N) coordinates"""
    n, N = h.n, h.N

    def field(obs: HybridField):
        return lambda y: obs.value(HybridPoint.from_vector(y, n, N))

    y = h.to_vector()
    ga = central_gradient(field(A), y)
    gb = central_gradient(field(B), y)

    def split(g: np.ndarray) -> PhaseGradient:
        return PhaseGradient(g[:n], g[n : 2 * n], g[2 * n : 2 * n + N], g[2 * n + N :])

    return gradient_bracket(split(ga), split(gb))
