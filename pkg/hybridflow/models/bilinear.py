"""Classical oscillators coupled bilinearly to one quantum oscillator"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
import sympy as sp
from scipy.linalg import expm
from scipy.special import gammaln

from hybridflow.dynamics.flow import Trajectory
from hybridflow.dynamics.model import ModelSpec
from hybridflow.observables.classical import ClassicalObservable, classical_symbols
from hybridflow.observables.hybrid import HybridObservable
from hybridflow.observables.operators import oscillator_hamiltonian, position_momentum_matrices
from hybridflow.phase_space.state import BasisSet
from hybridflow.utils.logger import get_logger

logger = get_logger(__name__)

TRUNCATION_TOL = 1e-10


def _positive_vector(values, name: str) -> Tuple[float, ...]:
    array = np.atleast_1d(np.asarray(values, dtype=float))
    if np.any(array <= 0):
        raise ValueError(f"{name} must be positive, got {array.tolist()}")
    return tuple(float(v) for v in array)


@dataclass(frozen=True)
class BilinearParams:
    """Masses, frequencies and couplings of the bilinear oscillator hybrid"""

    m: Tuple[float, ...] = (1.0,)
    omega: Tuple[float, ...] = (1.0,)
    M: float = 1.0
    Omega: float = 1.0
    lam: Tuple[float, ...] = (0.0,)
    N: int = 8

    def __post_init__(self):
        object.__setattr__(self, "m", _positive_vector(self.m, "Classical masses"))
        object.__setattr__(self, "omega", _positive_vector(self.omega, "Classical frequencies"))
        lam = tuple(float(v) for v in np.atleast_1d(np.asarray(self.lam, dtype=float)))
        object.__setattr__(self, "lam", lam)
        if not len(self.m) == len(self.omega) == len(self.lam):
            raise ValueError(
                f"m, omega and lam must have equal lengths, got "
                f"{len(self.m)}, {len(self.omega)}, {len(self.lam)}"
            )
        if self.M <= 0 or self.Omega <= 0:
            raise ValueError("Quantum mass and frequency must be positive")
        if self.N < 2:
            raise ValueError(f"Truncation dimension N must be >= 2, got {self.N}")

    @property
    def n(self) -> int:
        return len(self.m)

    @property
    def basis(self) -> BasisSet:
        return BasisSet.harmonic(self.N, self.M, self.Omega)


def classical_oscillators(params: BilinearParams) -> ClassicalObservable:
    """sum_k p_k^2 / (2 m_k) + m_k omega_k^2 x_k^2 / 2"""
    xs, ps = classical_symbols(params.n)
    expr = sum(
        (
            ps[k] ** 2 / (2 * sp.Float(params.m[k]))
            + sp.Float(params.m[k]) * sp.Float(params.omega[k]) ** 2 * xs[k] ** 2 / 2
            for k in range(params.n)
        ),
        sp.Integer(0),
    )
    return ClassicalObservable.from_expression(expr, params.n, name="H_cl")


def build_bilinear(params: BilinearParams) -> ModelSpec:
    """Hybrid with interaction (sum_k lam_k x_k) X"""
    basis = params.basis
    X, _ = position_momentum_matrices(basis)
    xs, _ = classical_symbols(params.n)
    coupling = ClassicalObservable.from_expression(
        sum((sp.Float(l) * x for l, x in zip(params.lam, xs)), sp.Integer(0)), params.n
    )
    model = ModelSpec(
        H_cl=classical_oscillators(params),
        H_qm=oscillator_hamiltonian(basis),
        I=HybridObservable.coupling(coupling, X, name="sum_k lam_k x_k X"),
        basis=basis,
        name="bilinear",
        params={"lam": list(params.lam), "N": params.N},
    )
    logger.info(f"Built bilinear model: n = {params.n}, N = {params.N}, lam = {list(params.lam)}")
    return model


def ehrenfest_matrix(params: BilinearParams) -> np.ndarray:
    """Generator A of the closed linear system d/dt (x, p, <X>, <P>) = A (x, p, <X>, <P>)"""
    n = params.n
    m, omega, lam = (np.array(v) for v in (params.m, params.omega, params.lam))
    A = np.zeros((2 * n + 2, 2 * n + 2))
    iX, iP = 2 * n, 2 * n + 1
    for k in range(n):
        A[k, n + k] = 1.0 / m[k]
        A[n + k, k] = -m[k] * omega[k] ** 2
        A[n + k, iX] = -lam[k]
        A[iP, k] = -lam[k]
    A[iX, iP] = 1.0 / params.M
    A[iP, iX] = -params.M * params.Omega**2
    return A


def _pair_frequencies(angles: np.ndarray) -> np.ndarray:
    positive = np.sort(angles)[::-1]
    # eigenvalues come in conjugate pairs
    return positive[::2]


def normal_mode_frequencies(params: BilinearParams) -> np.ndarray:
    """Normal-mode frequencies of the closed system, descending"""
    return _pair_frequencies(np.abs(np.imag(np.linalg.eigvals(ehrenfest_matrix(params)))))


def ehrenfest_reference(params: BilinearParams, y0, times) -> np.ndarray:
    """Exact solution exp(A t) y0 of the closed system at each time"""
    A = ehrenfest_matrix(params)
    y0 = np.asarray(y0, dtype=float)
    return np.array([expm(A * t) @ y0 for t in np.asarray(times, dtype=float)])


def closed_set_series(traj: Trajectory, basis: BasisSet) -> np.ndarray:
    """(x, p, <X>, <P>) extracted from a full hybrid trajectory"""
    X, P = position_momentum_matrices(basis)
    cl = np.array([np.concatenate([h.cl.x, h.cl.p]) for h in traj.states])
    qm = np.column_stack([traj.expectation_series(X), traj.expectation_series(P)])
    return np.hstack([cl, qm])


def fit_normal_modes(series: np.ndarray, dt: float) -> np.ndarray:
    """Frequencies of the least-squares one-step linear map of a sampled series

    ``series`` has one row per sample, spaced by dt.
    """
    series = np.asarray(series, dtype=float)
    B, *_ = np.linalg.lstsq(series[:-1], series[1:], rcond=None)
    return _pair_frequencies(np.abs(np.angle(np.linalg.eigvals(B))) / dt)


def coherent_state(alpha: complex, N: int) -> np.ndarray:
    """Truncated, renormalized coherent-state amplitudes"""
    k = np.arange(N)
    alpha = complex(alpha)
    if alpha == 0:
        c = np.zeros(N, dtype=complex)
        c[0] = 1.0
        return c
    log_mag = k * np.log(abs(alpha)) - 0.5 * gammaln(k + 1) - 0.5 * abs(alpha) ** 2
    c = np.exp(log_mag) * np.exp(1j * k * np.angle(alpha))
    return c / np.linalg.norm(c)


def truncation_occupation(amplitudes: Sequence[complex], level: int) -> float:
    """sum_{j >= level} |c_j|^2"""
    c = np.asarray(amplitudes, dtype=complex)
    return float(np.sum(np.abs(c[max(level, 0) :]) ** 2))


def check_truncation(amplitudes: Sequence[complex]) -> float:
    """Occupation above level N-3; warns when it exceeds TRUNCATION_TOL"""
    N = len(amplitudes)
    occupation = truncation_occupation(amplitudes, N - 2)
    if occupation > TRUNCATION_TOL:
        logger.warning(
            f"Initial state occupies levels above N-3 with weight {occupation:.3e}; "
            f"increase N (currently {N})"
        )
    return occupation
