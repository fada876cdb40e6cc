"""Hybrid observables: classical part plus an (x, p)-dependent quadratic form"""

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from hybridflow.observables.classical import ClassicalObservable, add_classical, fd_step
from hybridflow.observables.quadratic import (
    HERMITIAN_TOL,
    MatrixLike,
    as_hermitian,
    checked_real,
    hermitian_defect,
    quadratic_gradient,
)
from hybridflow.phase_space.state import HybridPoint
from hybridflow.utils.errors import DimensionMismatchError, IntegrityError

MatrixFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class PhaseGradient:
    """Partial derivatives of a scalar field w.r.t. (x, p, X, P)"""

    x: np.ndarray
    p: np.ndarray
    X: np.ndarray
    P: np.ndarray


def sector_derivatives(matrices: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Re (1/2) w^H D_k w for a stack of Hermitian matrices D_k"""
    if matrices.shape[0] == 0:
        return np.zeros(0)
    return 0.5 * np.real(np.einsum("i,kij,j->k", w.conj(), matrices, w))


@dataclass(frozen=True, eq=False)
class HybridObservable:
    """A(x, p; X, P) = a(x, p) + <Psi|M(x, p)|Psi>

    ``dM_dx``/``dM_dp`` return stacks of shape (n, N, N); without them the
    matrix derivatives are taken by central finite differences.
    """

    n: int
    N: int
    matrix_fn: Optional[MatrixFn] = None
    dM_dx: Optional[MatrixFn] = None
    dM_dp: Optional[MatrixFn] = None
    classical: Optional[ClassicalObservable] = None
    name: str = ""

    @classmethod
    def zero(cls, n: int, N: int) -> "HybridObservable":
        return cls(n=n, N=N, name="0")

    @classmethod
    def from_classical(cls, obs: ClassicalObservable, N: int) -> "HybridObservable":
        """Observable of the classical sector only"""
        return cls(n=obs.n, N=N, classical=obs, name=obs.name)

    @classmethod
    def from_quadratic(cls, obs: MatrixLike, n: int, name: str = "") -> "HybridObservable":
        """Observable of the quantum sector only"""
        G = np.array(as_hermitian(obs).entries)
        N = G.shape[0]
        zeros = np.zeros((n, N, N), dtype=complex)
        return cls(
            n=n,
            N=N,
            matrix_fn=lambda x, p: G,
            dM_dx=lambda x, p: zeros,
            dM_dp=lambda x, p: zeros,
            name=name or "quadratic",
        )

    @classmethod
    def coupling(
        cls, coeff: ClassicalObservable, obs: MatrixLike, name: str = ""
    ) -> "HybridObservable":
        """M(x, p) = coeff(x, p) * G"""
        G = np.array(as_hermitian(obs).entries)

        def dM_dx(x, p):
            return np.einsum("k,ij->kij", coeff.gradient(x, p)[0], G)

        def dM_dp(x, p):
            return np.einsum("k,ij->kij", coeff.gradient(x, p)[1], G)

        return cls(
            n=coeff.n,
            N=G.shape[0],
            matrix_fn=lambda x, p: coeff.value(x, p) * G,
            dM_dx=dM_dx,
            dM_dp=dM_dp,
            name=name or f"({coeff.name}) * G",
        )

    @property
    def has_matrix(self) -> bool:
        return self.matrix_fn is not None

    def raw_matrix(self, x: np.ndarray, p: np.ndarray) -> np.ndarray:
        """M(x, p) without the shape and Hermiticity checks"""
        if self.matrix_fn is None:
            return np.zeros((self.N, self.N), dtype=complex)
        return np.asarray(self.matrix_fn(x, p), dtype=complex)

    def matrix(self, x: np.ndarray, p: np.ndarray) -> np.ndarray:
        """M(x, p), checked for shape and Hermiticity"""
        M = self.raw_matrix(x, p)
        if self.matrix_fn is None:
            return M
        if M.shape != (self.N, self.N):
            raise DimensionMismatchError("hybrid matrix", (self.N, self.N), M.shape)
        defect = hermitian_defect(M)
        if defect > HERMITIAN_TOL * max(1.0, float(np.max(np.abs(M)))):
            raise IntegrityError(
                f"Hybrid observable {self.name!r} is not Hermitian at x={x}, p={p}: {defect:.3e}"
            )
        return M

    def matrix_derivatives(self, x: np.ndarray, p: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Stacks dM/dx_k and dM/dp_k, each of shape (n, N, N)"""
        n, N = self.n, self.N
        if self.matrix_fn is None:
            zeros = np.zeros((n, N, N), dtype=complex)
            return zeros, zeros
        if self.dM_dx is not None and self.dM_dp is not None:
            return (
                np.asarray(self.dM_dx(x, p), dtype=complex).reshape(n, N, N),
                np.asarray(self.dM_dp(x, p), dtype=complex).reshape(n, N, N),
            )
        return self._fd_matrix_derivatives(x, p)

    def _fd_matrix_derivatives(self, x, p) -> Tuple[np.ndarray, np.ndarray]:
        n, N = self.n, self.N
        y = np.concatenate([x, p]).astype(float)
        out = np.empty((2 * n, N, N), dtype=complex)
        for k in range(2 * n):
            h = fd_step(y[k])
            yp, ym = y.copy(), y.copy()
            yp[k] += h
            ym[k] -= h
            out[k] = (self.matrix(yp[:n], yp[n:]) - self.matrix(ym[:n], ym[n:])) / (2.0 * h)
        return out[:n], out[n:]

    def check_dimensions(self, h: HybridPoint) -> None:
        if h.n != self.n:
            raise DimensionMismatchError("classical dimension", self.n, h.n)
        if h.N != self.N:
            raise DimensionMismatchError("quantum dimension", self.N, h.N)

    def value(self, h: HybridPoint) -> float:
        self.check_dimensions(h)
        return self.value_at(h.cl.x, h.cl.p, h.qm.X + 1j * h.qm.P)

    def value_at(self, x: np.ndarray, p: np.ndarray, w: np.ndarray) -> float:
        """Value at classical coordinates (x, p) and quantum coordinates w = X + iP"""
        total = 0.0
        if self.classical is not None:
            total += self.classical.value(x, p)
        if self.matrix_fn is not None:
            quad = 0.5 * complex(np.vdot(w, self.matrix(x, p) @ w))
            total += checked_real(quad, abs(quad.real))
        return total

    def classical_gradient(
        self, x: np.ndarray, p: np.ndarray, w: np.ndarray
    ) -> Tuple[np.ndarray, np.ndarray]:
        """Derivatives w.r.t. x and p at quantum coordinates w = X + iP"""
        gx, gp = np.zeros(self.n), np.zeros(self.n)
        if self.classical is not None:
            cx, cp = self.classical.gradient(x, p)
            gx, gp = gx + cx, gp + cp
        if self.matrix_fn is not None and self.n > 0:
            dx, dp = self.matrix_derivatives(x, p)
            gx = gx + sector_derivatives(dx, w)
            gp = gp + sector_derivatives(dp, w)
        return gx, gp

    def gradient(self, h: HybridPoint) -> PhaseGradient:
        """All 2(n + N) partial derivatives at h"""
        self.check_dimensions(h)
        x, p = h.cl.x, h.cl.p
        gx, gp = self.classical_gradient(x, p, h.qm.X + 1j * h.qm.P)
        if self.matrix_fn is None:
            return PhaseGradient(gx, gp, np.zeros(self.N), np.zeros(self.N))
        gX, gP = quadratic_gradient(self.matrix(x, p), h.qm.X, h.qm.P)
        return PhaseGradient(gx, gp, gX, gP)

    def __add__(self, other: "HybridObservable") -> "HybridObservable":
        return combine(self, other)


def _analytic(obs: HybridObservable) -> bool:
    return obs.dM_dx is not None and obs.dM_dp is not None


def combine(a: HybridObservable, b: HybridObservable) -> HybridObservable:
    """Sum of two hybrid observables"""
    if (a.n, a.N) != (b.n, b.N):
        raise DimensionMismatchError("hybrid observable sum", (a.n, a.N), (b.n, b.N))
    if a.classical is None or b.classical is None:
        classical = a.classical if b.classical is None else b.classical
    else:
        classical = add_classical(a.classical, b.classical)
    if not b.has_matrix:
        matrix_fn, dM_dx, dM_dp = a.matrix_fn, a.dM_dx, a.dM_dp
    elif not a.has_matrix:
        matrix_fn, dM_dx, dM_dp = b.matrix_fn, b.dM_dx, b.dM_dp
    else:
        matrix_fn = lambda x, p: a.raw_matrix(x, p) + b.raw_matrix(x, p)  # noqa: E731
        dM_dx = dM_dp = None
        if _analytic(a) and _analytic(b):

            def dM_dx(x, p):
                return a.matrix_derivatives(x, p)[0] + b.matrix_derivatives(x, p)[0]

            def dM_dp(x, p):
                return a.matrix_derivatives(x, p)[1] + b.matrix_derivatives(x, p)[1]

    return HybridObservable(
        n=a.n,
        N=a.N,
        matrix_fn=matrix_fn,
        dM_dx=dM_dx,
        dM_dp=dM_dp,
        classical=classical,
        name=f"{a.name} + {b.name}",
    )


def evaluate_hybrid(obs: HybridObservable, h: HybridPoint) -> float:
    """Value of a hybrid observable at a hybrid point"""
    return obs.value(h)
