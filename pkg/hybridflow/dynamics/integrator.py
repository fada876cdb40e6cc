"""Implicit midpoint integration of hybrid Hamiltonian flows

The flat state vector is ``[x, p, X, P]``. For fixed classical coordinates the
quantum equations of motion are linear, dw/dt = -i G(x, p) w with w = X + iP, so
the quantum half of a midpoint step is the Cayley transform of G taken at the
classical midpoint. Only the classical midpoint is iterated.
"""

from enum import Enum
from typing import Callable, Optional, Tuple

import numpy as np

from hybridflow.observables.classical import fd_step
from hybridflow.observables.hybrid import HybridObservable
from hybridflow.utils.errors import StepFailureError
from hybridflow.utils.logger import get_logger

logger = get_logger(__name__)

SOLVER_TOL = 1e-13
MAX_ITERATIONS = 50
STAGNATION_RATIO = 0.5

_CBRT2 = 2.0 ** (1.0 / 3.0)
TRIPLE_JUMP = (1.0 / (2.0 - _CBRT2), -_CBRT2 / (2.0 - _CBRT2), 1.0 / (2.0 - _CBRT2))

SubstepHook = Callable[[np.ndarray, np.ndarray, float], None]


class Method(Enum):
    """Time-stepping scheme"""

    MIDPOINT = "midpoint"
    MIDPOINT4 = "midpoint4"

    @property
    def order(self) -> int:
        return 2 if self is Method.MIDPOINT else 4


def split_vector(y: np.ndarray, n: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(x, p, w) from a flat vector"""
    N = (y.size - 2 * n) // 2
    return y[:n], y[n : 2 * n], y[2 * n : 2 * n + N] + 1j * y[2 * n + N :]


def join_vector(x: np.ndarray, p: np.ndarray, w: np.ndarray) -> np.ndarray:
    return np.concatenate([x, p, w.real, w.imag])


def cayley_step(G: np.ndarray, w: np.ndarray, dt: float) -> np.ndarray:
    """(1 + i dt G/2)^-1 (1 - i dt G/2) w, unitary for Hermitian G"""
    A = 0.5j * dt * G
    return np.linalg.solve(np.eye(G.shape[0]) + A, w - A @ w)


def vector_field(H: HybridObservable, y: np.ndarray) -> np.ndarray:
    """Hamiltonian vector field of H at the flat point y"""
    x, p, w = split_vector(y, H.n)
    gx, gp = H.classical_gradient(x, p, w)
    return join_vector(gp, -gx, -1j * (H.matrix(x, p) @ w))


def _scaled(residual: float, y: np.ndarray) -> float:
    return residual / max(1.0, float(np.max(np.abs(y))) if y.size else 1.0)


def _cayley_map(H: HybridObservable, y0: np.ndarray, y1: np.ndarray, dt: float) -> np.ndarray:
    """One sweep of the midpoint fixed-point map"""
    n = H.n
    x0, p0, w0 = split_vector(y0, n)
    x1, p1, _ = split_vector(y1, n)
    xm, pm = 0.5 * (x0 + x1), 0.5 * (p0 + p1)
    w1 = cayley_step(H.raw_matrix(xm, pm), w0, dt)
    gx, gp = H.classical_gradient(xm, pm, 0.5 * (w0 + w1))
    return join_vector(x0 + dt * gp, p0 - dt * gx, w1)


def midpoint_residual(H: HybridObservable, y0: np.ndarray, y1: np.ndarray, dt: float) -> float:
    """Scaled max-norm of y1 - y0 - dt f((y0 + y1)/2)"""
    r = y1 - y0 - dt * vector_field(H, 0.5 * (y0 + y1))
    return _scaled(float(np.max(np.abs(r))), y1)


def _newton(
    H: HybridObservable, y0: np.ndarray, y1: np.ndarray, dt: float
) -> Tuple[np.ndarray, float, int]:
    """Newton iteration with a finite-difference Jacobian of the vector field"""
    dim = y0.size
    eye = np.eye(dim)
    residual = np.inf
    for iteration in range(1, MAX_ITERATIONS + 1):
        ym = 0.5 * (y0 + y1)
        r = y1 - y0 - dt * vector_field(H, ym)
        residual = _scaled(float(np.max(np.abs(r))), y1)
        if residual <= SOLVER_TOL:
            return y1, residual, iteration
        J = np.empty((dim, dim))
        for k in range(dim):
            h = fd_step(ym[k])
            yp, yn = ym.copy(), ym.copy()
            yp[k] += h
            yn[k] -= h
            J[:, k] = (vector_field(H, yp) - vector_field(H, yn)) / (2.0 * h)
        y1 = y1 - np.linalg.solve(eye - 0.5 * dt * J, r)
    return y1, residual, MAX_ITERATIONS


def midpoint_step(H: HybridObservable, y0: np.ndarray, dt: float) -> Tuple[np.ndarray, int]:
    """One implicit midpoint step; returns the new point and the iteration count

    Fixed-point sweeps run until the scaled increment is below SOLVER_TOL. When
    they stall or hit MAX_ITERATIONS, Newton takes over from the best iterate.
    """
    # Hermiticity is checked once per step; the sweeps below use the raw matrix
    H.matrix(y0[: H.n], y0[H.n : 2 * H.n])
    if H.n == 0:
        return _cayley_map(H, y0, y0, dt), 1
    y1 = y0
    previous = np.inf
    for iteration in range(1, MAX_ITERATIONS + 1):
        y_next = _cayley_map(H, y0, y1, dt)
        residual = _scaled(float(np.max(np.abs(y_next - y1))), y_next)
        y1 = y_next
        if residual <= SOLVER_TOL:
            return y1, iteration
        if iteration > 2 and residual > STAGNATION_RATIO * previous:
            break
        previous = residual
    logger.debug(f"Fixed-point iteration stalled at residual {residual:.3e}, switching to Newton")
    y1, residual, newton_iterations = _newton(H, y0, y1, dt)
    if residual > SOLVER_TOL:
        logger.error(f"Implicit midpoint failed with residual {residual:.3e} (dt = {dt})")
        raise StepFailureError(residual, iteration + newton_iterations)
    # Restore exact unitarity of the quantum half at the converged midpoint
    x0, p0, w0 = split_vector(y0, H.n)
    x1, p1, _ = split_vector(y1, H.n)
    w1 = cayley_step(H.matrix(0.5 * (x0 + x1), 0.5 * (p0 + p1)), w0, dt)
    return join_vector(x1, p1, w1), iteration + newton_iterations


def advance(
    H: HybridObservable,
    y0: np.ndarray,
    dt: float,
    method: Method = Method.MIDPOINT,
    on_substep: Optional[SubstepHook] = None,
) -> np.ndarray:
    """Advance a flat point by dt with the chosen scheme

    ``on_substep(y_start, y_end, h)`` sees every midpoint sub-step.
    """
    y = y0
    for gamma in (1.0,) if method is Method.MIDPOINT else TRIPLE_JUMP:
        y_next = midpoint_step(H, y, gamma * dt)[0]
        if on_substep is not None:
            on_substep(y, y_next, gamma * dt)
        y = y_next
    return y
