"""Quantum observables as Hermitian quadratic forms in (X, P)"""

from dataclasses import dataclass
from typing import List, Tuple, Union

import numpy as np

from hybridflow.phase_space.state import QuantumPhasePoint
from hybridflow.utils.errors import DimensionMismatchError, IntegrityError

HERMITIAN_TOL = 1e-12
REALNESS_TOL = 1e-12


def hermitian_defect(G: np.ndarray) -> float:
    """max |G_ij - conj(G_ji)|"""
    return float(np.max(np.abs(G - G.conj().T))) if G.size else 0.0


def quadratic_value(G: np.ndarray, X: np.ndarray, P: np.ndarray) -> complex:
    """(1/2) sum_ij G_ij (X_i - i P_i)(X_j + i P_j), before taking the real part"""
    w = X + 1j * P
    return 0.5 * complex(np.vdot(w, G @ w))


def quadratic_gradient(
    G: np.ndarray, X: np.ndarray, P: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """(dF/dX, dF/dP) of F = <Psi|G|Psi>; dF/dX + i dF/dP = G (X + iP)"""
    w = G @ (X + 1j * P)
    return w.real, w.imag


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """Dense complex N x N matrix with G_ij = conj(G_ji)"""

    entries: np.ndarray

    def __post_init__(self):
        G = np.array(self.entries, dtype=complex)
        if G.ndim != 2 or G.shape[0] != G.shape[1]:
            raise DimensionMismatchError("Hermitian matrix shape", "square", G.shape)
        defect = hermitian_defect(G)
        if defect > HERMITIAN_TOL * max(1.0, float(np.max(np.abs(G))) if G.size else 1.0):
            raise IntegrityError(f"Matrix is not Hermitian: max |G - G^H| = {defect:.3e}")
        G = 0.5 * (G + G.conj().T)
        G.setflags(write=False)
        object.__setattr__(self, "entries", G)

    @property
    def N(self) -> int:
        return int(self.entries.shape[0])

    @classmethod
    def identity(cls, N: int) -> "HermitianMatrix":
        return cls(np.eye(N))

    @classmethod
    def zeros(cls, N: int) -> "HermitianMatrix":
        return cls(np.zeros((N, N)))

    @classmethod
    def diagonal(cls, values) -> "HermitianMatrix":
        return cls(np.diag(np.asarray(values, dtype=float)))

    def __add__(self, other: "HermitianMatrix") -> "HermitianMatrix":
        return HermitianMatrix(self.entries + other.entries)

    def scaled(self, factor: float) -> "HermitianMatrix":
        return HermitianMatrix(float(factor) * self.entries)

    def to_rows(self) -> List[List[List[float]]]:
        """JSON form: rows of [re, im] entries"""
        return [[[float(v.real), float(v.imag)] for v in row] for row in self.entries]

    @classmethod
    def from_rows(cls, rows) -> "HermitianMatrix":
        """Inverse of to_rows; plain real numbers are accepted as entries too"""
        data = [
            [complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v) for v in row]
            for row in rows
        ]
        return cls(np.array(data, dtype=complex))


@dataclass(frozen=True, eq=False)
class QuadraticObservable:
    """G(X, P) = <Psi|G|Psi> for a self-adjoint G"""

    matrix: HermitianMatrix
    name: str = ""

    @property
    def N(self) -> int:
        return self.matrix.N

    def value(self, q: QuantumPhasePoint) -> float:
        return expectation(self, q)

    def gradient(self, q: QuantumPhasePoint) -> Tuple[np.ndarray, np.ndarray]:
        _check_dim(self.matrix, q)
        return quadratic_gradient(self.matrix.entries, q.X, q.P)


MatrixLike = Union[QuadraticObservable, HermitianMatrix]


def as_hermitian(obs: MatrixLike) -> HermitianMatrix:
    return obs.matrix if isinstance(obs, QuadraticObservable) else obs


def _check_dim(G: HermitianMatrix, q: QuantumPhasePoint) -> None:
    if G.N != q.N:
        raise DimensionMismatchError("observable matrix", q.N, G.N)


def checked_real(value: complex, scale: float, tol: float = REALNESS_TOL) -> float:
    """Real part of a value that must be real; raises on a large imaginary residual"""
    if abs(value.imag) > tol * max(1.0, scale):
        raise IntegrityError(f"Observable value has imaginary residual {value.imag:.3e}")
    return float(value.real)


def expectation(obs: MatrixLike, q: QuantumPhasePoint) -> float:
    """<Psi|G|Psi> evaluated on a quantum phase point"""
    G = as_hermitian(obs)
    _check_dim(G, q)
    value = quadratic_value(G.entries, q.X, q.P)
    return checked_real(value, abs(value.real))
