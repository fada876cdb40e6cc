"""Joint classical/quantum state types"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from hybridflow.utils.errors import ConstraintViolationError, DimensionMismatchError

DEFAULT_CONSTRAINT_TOL = 1e-12


def _frozen_vector(values, name: str) -> np.ndarray:
    array = np.array(values, dtype=float).reshape(-1)
    if not np.all(np.isfinite(array)):
        raise ValueError(f"{name} contains non-finite entries")
    array.setflags(write=False)
    return array


class BasisKind(Enum):
    """Kind of orthonormal basis behind the quantum coordinates"""

    ABSTRACT = "abstract-orthonormal"
    HARMONIC = "harmonic-oscillator-position"


@dataclass(frozen=True, eq=False)
class ClassicalPoint:
    """Canonical classical coordinates (x_k, p_k)"""

    x: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        x = _frozen_vector(self.x, "x")
        p = _frozen_vector(self.p, "p")
        if x.shape != p.shape:
            raise DimensionMismatchError("classical momenta", x.size, p.size)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "p", p)

    @property
    def n(self) -> int:
        """Number of classical degrees of freedom"""
        return int(self.x.size)


@dataclass(frozen=True, eq=False)
class QuantumPhasePoint:
    """Oscillator-representation coordinates (X_i, P_i) of a state vector

    With ``constraint_tol`` set, construction rejects points whose constraint
    value differs from 1 by more than the tolerance. ``None`` skips the check
    (used for integrator output, whose drift is monitored separately).
    """

    X: np.ndarray
    P: np.ndarray
    constraint_tol: Optional[float] = DEFAULT_CONSTRAINT_TOL

    def __post_init__(self):
        X = _frozen_vector(self.X, "X")
        P = _frozen_vector(self.P, "P")
        if X.shape != P.shape:
            raise DimensionMismatchError("quantum momenta", X.size, P.size)
        if X.size < 1:
            raise DimensionMismatchError("quantum dimension", ">= 1", X.size)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "P", P)
        if self.constraint_tol is not None:
            value = self.constraint
            if abs(value - 1.0) > self.constraint_tol:
                raise ConstraintViolationError(value, self.constraint_tol)

    @property
    def N(self) -> int:
        """Dimension of the truncated Hilbert space"""
        return int(self.X.size)

    @property
    def constraint(self) -> float:
        """C = (1/2) sum_i (X_i^2 + P_i^2)"""
        return 0.5 * float(np.dot(self.X, self.X) + np.dot(self.P, self.P))

    @property
    def z(self) -> np.ndarray:
        """Complex amplitudes (X + iP)/sqrt(2)"""
        return (self.X + 1j * self.P) / np.sqrt(2.0)

    @classmethod
    def unchecked(cls, X, P) -> "QuantumPhasePoint":
        """Build a point without the constraint check"""
        return cls(X, P, constraint_tol=None)


@dataclass(frozen=True, eq=False)
class HybridPoint:
    """Point of the product state space, 2(n+N) coordinates"""

    cl: ClassicalPoint
    qm: QuantumPhasePoint

    @property
    def n(self) -> int:
        return self.cl.n

    @property
    def N(self) -> int:
        return self.qm.N

    def to_vector(self) -> np.ndarray:
        """Flat coordinates [x, p, X, P]"""
        return np.concatenate([self.cl.x, self.cl.p, self.qm.X, self.qm.P])

    @classmethod
    def from_vector(
        cls, y: np.ndarray, n: int, N: int, constraint_tol: Optional[float] = None
    ) -> "HybridPoint":
        """Inverse of to_vector"""
        y = np.asarray(y, dtype=float)
        if y.size != 2 * (n + N):
            raise DimensionMismatchError("flat hybrid vector", 2 * (n + N), y.size)
        return cls(
            ClassicalPoint(y[:n], y[n : 2 * n]),
            QuantumPhasePoint(y[2 * n : 2 * n + N], y[2 * n + N :], constraint_tol=constraint_tol),
        )

    def with_classical(self, x=None, p=None) -> "HybridPoint":
        """Copy with replaced classical coordinates"""
        return HybridPoint(
            ClassicalPoint(self.cl.x if x is None else x, self.cl.p if p is None else p),
            self.qm,
        )


@dataclass(frozen=True)
class BasisSet:
    """Orthonormal basis {|Phi_i>} of the truncated quantum sector"""

    kind: BasisKind
    N: int
    mass: float = 1.0
    frequency: float = 1.0

    def __post_init__(self):
        if isinstance(self.kind, str):
            object.__setattr__(self, "kind", BasisKind(self.kind))
        if self.N < 1:
            raise ValueError(f"Basis dimension must be >= 1, got {self.N}")
        if self.kind == BasisKind.HARMONIC and (self.mass <= 0 or self.frequency <= 0):
            raise ValueError("Harmonic-oscillator basis needs positive mass and frequency")

    @property
    def oscillator_length(self) -> float:
        """Length scale 1/sqrt(M * Omega) of the Hermite functions (hbar = 1)"""
        return 1.0 / np.sqrt(self.mass * self.frequency)

    @classmethod
    def abstract(cls, N: int) -> "BasisSet":
        return cls(BasisKind.ABSTRACT, N)

    @classmethod
    def harmonic(cls, N: int, mass: float = 1.0, frequency: float = 1.0) -> "BasisSet":
        return cls(BasisKind.HARMONIC, N, mass, frequency)
