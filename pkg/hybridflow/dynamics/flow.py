"""Time stepping of hybrid models and trajectory recording"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Dict, List, Optional, Union

import numpy as np
import pandas as pd
from scipy.integrate import solve_ivp

from hybridflow.dynamics.integrator import (
    MAX_ITERATIONS,
    SOLVER_TOL,
    Method,
    SubstepHook,
    advance,
    split_vector,
    vector_field,
)
from hybridflow.dynamics.model import ModelSpec
from hybridflow.observables.quadratic import MatrixLike, expectation
from hybridflow.phase_space.state import HybridPoint, QuantumPhasePoint
from hybridflow.utils.errors import ConstraintViolationError, IntegrityError, StepFailureError
from hybridflow.utils.logger import get_logger

logger = get_logger(__name__)

# Largest |C - 1| accepted at the start of a step
DRIFT_LIMIT = 1e-6
FD_EPSILON = 1e-5

StepHook = Callable[[np.ndarray, float, float], np.ndarray]


def as_method(method: Union[str, Method]) -> Method:
    return method if isinstance(method, Method) else Method(method)


def flow_step(
    model: ModelSpec, h: HybridPoint, dt: float, method: Union[str, Method] = Method.MIDPOINT
) -> HybridPoint:
    """Advance a hybrid point by one step of the full equations of motion"""
    if not dt > 0:
        raise ValueError(f"Time step must be positive, got {dt}")
    model.check_point(h)
    if abs(h.qm.constraint - 1.0) > DRIFT_LIMIT:
        raise ConstraintViolationError(h.qm.constraint, DRIFT_LIMIT)
    y = advance(model.hamiltonian, h.to_vector(), dt, as_method(method))
    return HybridPoint.from_vector(y, model.n, model.N)


def renormalize(q: QuantumPhasePoint) -> QuantumPhasePoint:
    """Rescale (X, P) by 1/sqrt(C)"""
    C = q.constraint
    logger.warning(f"Renormalizing quantum sector: C = {C:.17g}")
    scale = 1.0 / np.sqrt(C)
    return QuantumPhasePoint(q.X * scale, q.P * scale, constraint_tol=None)


def step_count(T: float, dt: float) -> int:
    """Number of uniform steps covering [0, T] with step size at most dt"""
    return max(1, int(np.ceil(T / dt - 1e-9)))


@dataclass
class Trajectory:
    """Uniformly sampled hybrid trajectory with energy and constraint monitors

    ``coords`` holds one flat [x, p, X, P] row per sample; hybrid points are built
    from it on demand.
    """

    times: np.ndarray
    coords: np.ndarray
    n: int
    energy: np.ndarray
    constraint: np.ndarray
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.coords = np.atleast_2d(np.asarray(self.coords, dtype=float))
        self.energy = np.asarray(self.energy, dtype=float)
        self.constraint = np.asarray(self.constraint, dtype=float)
        lengths = {len(self.times), len(self.coords), len(self.energy), len(self.constraint)}
        if len(lengths) != 1:
            raise ValueError(f"Trajectory series have unequal lengths: {sorted(lengths)}")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("Trajectory times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def N(self) -> int:
        return (self.coords.shape[1] - 2 * self.n) // 2

    def point(self, k: int) -> HybridPoint:
        """Hybrid point of sample k"""
        return HybridPoint.from_vector(self.coords[k], self.n, self.N)

    @cached_property
    def states(self) -> List[HybridPoint]:
        return [self.point(k) for k in range(len(self))]

    @property
    def final(self) -> HybridPoint:
        return self.point(-1)

    def coordinates(self) -> np.ndarray:
        """Array of flat [x, p, X, P] vectors, one row per sample"""
        return self.coords.copy()

    def coordinate(self, kind: str, index: int) -> np.ndarray:
        """Series of one coordinate; kind is one of x, p, X, P"""
        offset = {"x": 0, "p": self.n, "X": 2 * self.n, "P": 2 * self.n + self.N}[kind]
        return self.coords[:, offset + index].copy()

    def expectation_series(self, obs: MatrixLike) -> np.ndarray:
        """<Psi(t)|G|Psi(t)> along the trajectory"""
        return np.array([expectation(obs, h.qm) for h in self.states])

    def max_energy_drift(self) -> float:
        return float(np.max(np.abs(self.energy - self.energy[0])))

    def max_constraint_drift(self) -> float:
        return float(np.max(np.abs(self.constraint - 1.0)))

    def to_dataframe(self) -> pd.DataFrame:
        """Columns t, x_1..x_n, p_1..p_n, X_1..X_N, P_1..P_N, H_sigma, C"""
        n, N = self.n, self.N
        columns = (
            [f"x_{k + 1}" for k in range(n)]
            + [f"p_{k + 1}" for k in range(n)]
            + [f"X_{i + 1}" for i in range(N)]
            + [f"P_{i + 1}" for i in range(N)]
        )
        df = pd.DataFrame(self.coordinates(), columns=columns)
        df.insert(0, "t", self.times)
        df["H_sigma"] = self.energy
        df["C"] = self.constraint
        return df

    def summary(self) -> Dict[str, Any]:
        return {
            "samples": len(self),
            "t_final": float(self.times[-1]),
            "energy_initial": float(self.energy[0]),
            "energy_final": float(self.energy[-1]),
            "max_energy_drift": self.max_energy_drift(),
            "max_constraint_drift": self.max_constraint_drift(),
            "metadata": self.metadata,
        }


def energy_series(model: ModelSpec, coords: np.ndarray) -> np.ndarray:
    """H_Sigma at every row of a flat coordinate array"""
    H, n = model.hamiltonian, model.n
    values = np.array([H.value_at(*split_vector(y, n)) for y in coords])
    if not np.all(np.isfinite(values)):
        raise IntegrityError(f"Hamiltonian of {model.name!r} is not finite along the trajectory")
    return values


def constraint_series(coords: np.ndarray, n: int) -> np.ndarray:
    """C = (1/2) sum_i (X_i^2 + P_i^2) at every row"""
    quantum = coords[:, 2 * n :]
    return 0.5 * np.einsum("ij,ij->i", quantum, quantum)


def trajectory(
    model: ModelSpec,
    h0: HybridPoint,
    T: float,
    dt: float,
    method: Union[str, Method] = Method.MIDPOINT,
    renormalize_every: Optional[int] = None,
    hook: Optional[StepHook] = None,
    on_substep: Optional[SubstepHook] = None,
) -> Trajectory:
    """Integrate from t = 0 to T; the step is shrunk so that T is hit exactly

    ``hook(y, t_prev, t_next)`` may modify the flat state after each step;
    ``on_substep`` is handed to the integrator.
    """
    if not T > 0:
        raise ValueError(f"Total time must be positive, got {T}")
    if not dt > 0:
        raise ValueError(f"Time step must be positive, got {dt}")
    model.check_point(h0)
    method = as_method(method)
    steps = step_count(T, dt)
    step = T / steps
    times = np.arange(steps + 1) * step
    times[-1] = T

    H = model.hamiltonian
    n, N = model.n, model.N
    y = h0.to_vector()
    coords = np.empty((steps + 1, y.size))
    coords[0] = y
    for k in range(steps):
        try:
            y = advance(H, y, step, method, on_substep)
        except StepFailureError as e:
            logger.error(f"Step {k} of {model.name!r} failed: {e}")
            raise e.at_step(k) from e
        if hook is not None:
            y = hook(y, times[k], times[k + 1])
        if renormalize_every and (k + 1) % renormalize_every == 0:
            h = HybridPoint.from_vector(y, n, N)
            y = HybridPoint(h.cl, renormalize(h.qm)).to_vector()
        coords[k + 1] = y

    metadata = {
        "model": model.name,
        "integrator": method.value,
        "order": method.order,
        "dt": step,
        "dt_requested": dt,
        "steps": steps,
        "solver_tol": SOLVER_TOL,
        "max_iterations": MAX_ITERATIONS,
        "renormalize_every": renormalize_every,
    }
    logger.debug(f"Integrated {model.name!r}: {steps} steps of {step:.3e}")
    return Trajectory(
        times=times,
        coords=coords,
        n=n,
        energy=energy_series(model, coords),
        constraint=constraint_series(coords, n),
        metadata=metadata,
    )


def reference_solution(
    model: ModelSpec, h0: HybridPoint, times, rtol: float = 1e-12, atol: float = 1e-12
) -> Trajectory:
    """High-order adaptive reference integration (DOP853) sampled at ``times``"""
    times = np.asarray(times, dtype=float)
    model.check_point(h0)
    H = model.hamiltonian
    sol = solve_ivp(
        lambda t, y: vector_field(H, y),
        (float(times[0]), float(times[-1])),
        h0.to_vector(),
        method="DOP853",
        t_eval=times,
        rtol=rtol,
        atol=atol,
    )
    if not sol.success:
        raise StepFailureError(float("nan"), int(sol.nfev))
    coords = sol.y.T
    return Trajectory(
        times=sol.t,
        coords=coords,
        n=model.n,
        energy=energy_series(model, coords),
        constraint=constraint_series(coords, model.n),
        metadata={"model": model.name, "integrator": "DOP853", "rtol": rtol, "atol": atol},
    )


def canonical_form(n: int, N: int) -> np.ndarray:
    """Canonical two-form in [x, p, X, P] ordering"""
    omega = np.zeros((2 * (n + N), 2 * (n + N)))
    for offset, size in ((0, n), (2 * n, N)):
        eye = np.eye(size)
        omega[offset : offset + size, offset + size : offset + 2 * size] = eye
        omega[offset + size : offset + 2 * size, offset : offset + size] = -eye
    return omega


def symplecticity_defect(
    model: ModelSpec, h: HybridPoint, dt: float, method: Union[str, Method] = Method.MIDPOINT
) -> float:
    """max |J^T Omega J - Omega| for the finite-difference Jacobian J of one step"""
    method = as_method(method)
    H = model.hamiltonian
    y0 = h.to_vector()
    dim = y0.size
    J = np.empty((dim, dim))
    for k in range(dim):
        yp, ym = y0.copy(), y0.copy()
        yp[k] += FD_EPSILON
        ym[k] -= FD_EPSILON
        J[:, k] = (advance(H, yp, dt, method) - advance(H, ym, dt, method)) / (2.0 * FD_EPSILON)
    omega = canonical_form(model.n, model.N)
    return float(np.max(np.abs(J.T @ omega @ J - omega)))
