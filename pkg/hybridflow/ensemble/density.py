"""Hybrid probability densities built from classical weights and projector states

A density is rho(x, p; Psi) = sum_j w_j(x, p) |<j|Psi>|^2, normalized so that
sum_j of the integral of w_j over classical phase space equals 1.
"""

from dataclasses import dataclass
from itertools import product
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import roots_hermite
from scipy.stats import norm, qmc

from hybridflow.observables.classical import ClassicalObservable, scale_classical
from hybridflow.phase_space.operations import NORM_TOL, decode_state
from hybridflow.phase_space.state import HybridPoint
from hybridflow.utils.errors import DimensionMismatchError, IntegrityError, NormalizationError
from hybridflow.utils.logger import get_logger

logger = get_logger(__name__)

NORMALIZATION_TOL = 1e-6
ORTHONORMAL_TOL = 1e-9
DEFAULT_NODES = 24
MAX_QUADRATURE_POINTS = 2_000_000
SOBOL_LOG2_POINTS = 16
SOBOL_SEED = 20240601
SOBOL_NORMALIZATION_TOL = 1e-3


def _unit_state(state) -> np.ndarray:
    c = np.asarray(state, dtype=complex).reshape(-1)
    norm = float(np.linalg.norm(c))
    if abs(norm - 1.0) > NORM_TOL:
        raise NormalizationError(norm, NORM_TOL)
    c = c / norm
    c.setflags(write=False)
    return c


@dataclass(frozen=True, eq=False)
class DensityComponent:
    """Weight function w_j(x, p) attached to the projector |j><j|"""

    weight: ClassicalObservable
    state: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "state", _unit_state(self.state))


@dataclass(frozen=True, eq=False)
class DensitySpec:
    components: Tuple[DensityComponent, ...]

    def __post_init__(self):
        components = tuple(self.components)
        if not components:
            raise ValueError("A density needs at least one component")
        n, N = components[0].weight.n, components[0].state.size
        for c in components[1:]:
            if c.weight.n != n:
                raise DimensionMismatchError("density weight classical dimension", n, c.weight.n)
            if c.state.size != N:
                raise DimensionMismatchError("density projector state", N, c.state.size)
        object.__setattr__(self, "components", components)

    @property
    def n(self) -> int:
        return self.components[0].weight.n

    @property
    def N(self) -> int:
        return int(self.components[0].state.size)

    @property
    def states(self) -> List[np.ndarray]:
        return [c.state for c in self.components]

    @classmethod
    def single(cls, weight: ClassicalObservable, state) -> "DensitySpec":
        return cls((DensityComponent(weight, state),))

    @classmethod
    def mixture(cls, p: float, first: "DensitySpec", second: "DensitySpec") -> "DensitySpec":
        """p * first + (1 - p) * second"""
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"Mixture probability must lie in [0, 1], got {p}")
        if (first.n, first.N) != (second.n, second.N):
            raise DimensionMismatchError("mixture", (first.n, first.N), (second.n, second.N))
        return cls(
            tuple(DensityComponent(scale_classical(c.weight, p), c.state) for c in first.components)
            + tuple(
                DensityComponent(scale_classical(c.weight, 1.0 - p), c.state)
                for c in second.components
            )
        )

    def weights_at(self, x: np.ndarray, p: np.ndarray) -> np.ndarray:
        """All w_j(x, p); a negative weight raises IntegrityError"""
        w = np.array([c.weight.value(x, p) for c in self.components])
        if np.any(w < 0):
            j = int(np.argmin(w))
            raise IntegrityError(
                f"Density weight w_{j + 1} is negative at x={list(x)}, p={list(p)}: {w[j]:.3e}"
            )
        return w


def density_value(
    dens: DensitySpec, h: HybridPoint, states: Optional[Sequence[np.ndarray]] = None
) -> float:
    """sum_j w_j(x, p) |<j|Psi>|^2

    ``states`` replaces the projector states, e.g. by their co-evolved images.
    """
    if h.n != dens.n:
        raise DimensionMismatchError("classical dimension", dens.n, h.n)
    if h.N != dens.N:
        raise DimensionMismatchError("quantum dimension", dens.N, h.N)
    w = dens.weights_at(h.cl.x, h.cl.p)
    psi = decode_state(h.qm)
    projectors = dens.states if states is None else states
    overlaps = np.array([abs(np.vdot(j, psi)) ** 2 for j in projectors])
    return float(np.dot(w, overlaps))


def uses_tensor_rule(n: int, nodes: int = DEFAULT_NODES) -> bool:
    """Whether the tensor-product rule fits in MAX_QUADRATURE_POINTS for 2n coordinates"""
    return nodes ** (2 * n) <= MAX_QUADRATURE_POINTS


def normalization_tolerance(n: int, nodes: int = DEFAULT_NODES) -> float:
    """Accuracy the normalization estimate is held to for this dimension"""
    return NORMALIZATION_TOL if uses_tensor_rule(n, nodes) else SOBOL_NORMALIZATION_TOL


def _tensor_rule(
    dim: int, nodes: int, center: np.ndarray, width: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    t, w = roots_hermite(nodes)
    # Gaussian exp(-t^2) is divided back out so that arbitrary integrands can be used
    w1 = w * np.exp(t * t) * np.sqrt(2.0)
    points = np.array(list(product(t, repeat=dim))) * np.sqrt(2.0) * width + center
    weights = np.prod(np.array(list(product(w1, repeat=dim))), axis=1) * np.prod(width)
    return points, weights


def _sobol_rule(dim: int, center: np.ndarray, width: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    u = qmc.Sobol(d=dim, scramble=True, seed=SOBOL_SEED).random_base2(m=SOBOL_LOG2_POINTS)
    z = norm.ppf(np.clip(u, 1e-15, 1.0 - 1e-15))
    points = center + width * z
    q = np.prod(norm.pdf(z), axis=1) / np.prod(width)
    return points, 1.0 / (len(points) * q)


def phase_space_rule(
    n: int,
    nodes: int = DEFAULT_NODES,
    center: Optional[np.ndarray] = None,
    width: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Integration rule over the 2n classical coordinates

    Returns points (K, 2n) and weights (K,) with sum_k W_k f(y_k) ~ integral of f.
    Up to MAX_QUADRATURE_POINTS this is the tensor-product Gauss-Hermite rule, exact
    for Gaussians of the given center and width times low-degree polynomials. Larger
    dimensions get a scrambled Sobol importance rule drawn from that same Gaussian,
    accurate to about SOBOL_NORMALIZATION_TOL for smooth weights.
    """
    dim = 2 * n
    if dim == 0:
        return np.zeros((1, 0)), np.ones(1)
    center = np.zeros(dim) if center is None else np.asarray(center, dtype=float)
    width = np.ones(dim) if width is None else np.asarray(width, dtype=float)
    if np.any(width <= 0):
        raise ValueError("Quadrature widths must be positive")
    if uses_tensor_rule(n, nodes):
        return _tensor_rule(dim, nodes, center, width)
    logger.debug(
        f"{nodes}^{dim} tensor points exceed {MAX_QUADRATURE_POINTS}; "
        f"using 2^{SOBOL_LOG2_POINTS} Sobol points"
    )
    return _sobol_rule(dim, center, width)


def normalization(
    dens: DensitySpec,
    nodes: int = DEFAULT_NODES,
    center: Optional[np.ndarray] = None,
    width: Optional[np.ndarray] = None,
) -> float:
    """sum_j of the phase-space integral of w_j by quadrature"""
    points, weights = phase_space_rule(dens.n, nodes, center, width)
    n = dens.n
    total = 0.0
    for y, W in zip(points, weights):
        total += W * float(np.sum(dens.weights_at(y[:n], y[n:])))
    return total


def check_normalization(dens: DensitySpec, tol: Optional[float] = None, **kwargs) -> float:
    """Normalization residual; raises IntegrityError above ``tol``

    The default tolerance is the accuracy of the rule used for this dimension.
    """
    if tol is None:
        tol = normalization_tolerance(dens.n, kwargs.get("nodes", DEFAULT_NODES))
    residual = abs(normalization(dens, **kwargs) - 1.0)
    if residual > tol:
        raise IntegrityError(f"Density normalization off by {residual:.3e} (tolerance {tol:g})")
    return residual


@dataclass(frozen=True, eq=False)
class MatrixDensity:
    """Fully general rho(x, p) given as a Hermitian-matrix function

    Evaluated as <Psi|rho(x, p)|Psi>; not accepted by the ensemble sampler.
    """

    n: int
    N: int
    matrix_fn: Callable[[np.ndarray, np.ndarray], np.ndarray]

    def value(self, h: HybridPoint) -> float:
        rho = np.asarray(self.matrix_fn(h.cl.x, h.cl.p), dtype=complex)
        if rho.shape != (self.N, self.N):
            raise DimensionMismatchError("density matrix", (self.N, self.N), rho.shape)
        psi = decode_state(h.qm)
        return float(np.real(np.vdot(psi, rho @ psi)))


@dataclass(frozen=True)
class FactorComponent:
    weight: float
    state: Tuple[complex, ...]


@dataclass(frozen=True, eq=False)
class SeparableTerm:
    """w_l(x, p) rho_l^(A) (x) rho_l^(B), each factor a list of weighted states"""

    weight: ClassicalObservable
    factor_a: Tuple[FactorComponent, ...]
    factor_b: Tuple[FactorComponent, ...]


@dataclass(frozen=True, eq=False)
class SeparableRecipe:
    """Mixture of product states over a factorization N = N_A * N_B

    ``N`` defaults to N_A * N_B; factor state lengths are checked against N_A and N_B.
    """

    N_A: int
    N_B: int
    terms: Tuple[SeparableTerm, ...]
    N: Optional[int] = None

    def __post_init__(self):
        if self.N_A < 1 or self.N_B < 1:
            raise ValueError(f"Factor dimensions must be >= 1, got {self.N_A} and {self.N_B}")
        if self.N is None:
            object.__setattr__(self, "N", self.N_A * self.N_B)
        elif self.N_A * self.N_B != self.N:
            raise DimensionMismatchError("factorization N_A * N_B", self.N, self.N_A * self.N_B)
        for term in self.terms:
            factors = (("A", term.factor_a, self.N_A), ("B", term.factor_b, self.N_B))
            for label, factor, dim in factors:
                for c in factor:
                    if len(c.state) != dim:
                        raise DimensionMismatchError(f"factor {label} state", dim, len(c.state))


def _check_factor(factor: Sequence[FactorComponent], dim: int, label: str) -> None:
    states = np.array([_unit_state(c.state) for c in factor])
    if states.shape[1] != dim:
        raise DimensionMismatchError(f"factor {label} state", dim, states.shape[1])
    gram = states.conj() @ states.T
    if np.max(np.abs(gram - np.eye(len(factor)))) > ORTHONORMAL_TOL:
        raise IntegrityError(f"Factor {label} states are not orthonormal")
    if any(c.weight < 0 for c in factor):
        raise IntegrityError(f"Factor {label} has a negative eigenvalue weight")


def separable_density(recipe: SeparableRecipe) -> DensitySpec:
    """Expand a mixture of product states into flat components |j_l, j'_l>"""
    components = []
    for term in recipe.terms:
        _check_factor(term.factor_a, recipe.N_A, "A")
        _check_factor(term.factor_b, recipe.N_B, "B")
        for a in term.factor_a:
            for b in term.factor_b:
                state = np.kron(_unit_state(a.state), _unit_state(b.state))
                weight = scale_classical(term.weight, a.weight * b.weight)
                components.append(DensityComponent(weight, state))
    return DensitySpec(tuple(components))


def separable_density_direct(recipe: SeparableRecipe, h: HybridPoint) -> float:
    """sum_l w_l(x, p) <Psi|rho_l^(A) (x) rho_l^(B)|Psi> by explicit Kronecker products"""
    psi = decode_state(h.qm)
    total = 0.0
    for term in recipe.terms:
        rho_a = sum(c.weight * np.outer(c.state, np.conj(c.state)) for c in term.factor_a)
        rho_b = sum(c.weight * np.outer(c.state, np.conj(c.state)) for c in term.factor_b)
        rho = np.kron(rho_a, rho_b)
        total += term.weight.value(h.cl.x, h.cl.p) * float(np.real(np.vdot(psi, rho @ psi)))
    return total
