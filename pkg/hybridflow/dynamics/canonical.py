"""Finite canonical transformations and the unitary-evolution oracle"""

from typing import Union

import numpy as np
from scipy.linalg import eigh

from hybridflow.dynamics.integrator import Method, advance
from hybridflow.observables.hybrid import HybridObservable
from hybridflow.observables.quadratic import MatrixLike, as_hermitian
from hybridflow.phase_space.operations import SQRT2, decode_state
from hybridflow.phase_space.state import HybridPoint, QuantumPhasePoint
from hybridflow.utils.errors import DimensionMismatchError

MAX_SUBSTEP = 1e-3


def canonical_step(
    generator: HybridObservable,
    h: HybridPoint,
    delta_alpha: float,
    method: Union[str, Method] = Method.MIDPOINT4,
) -> HybridPoint:
    """Move h along the Hamiltonian flow of ``generator`` by parameter delta_alpha

    The flow is integrated in equal sub-steps no longer than MAX_SUBSTEP.
    """
    generator.check_dimensions(h)
    if delta_alpha == 0:
        return h
    method = method if isinstance(method, Method) else Method(method)
    substeps = max(1, int(np.ceil(abs(delta_alpha) / MAX_SUBSTEP - 1e-9)))
    step = delta_alpha / substeps
    y = h.to_vector()
    for _ in range(substeps):
        y = advance(generator, y, step, method)
    return HybridPoint.from_vector(y, h.n, h.N)


def unitary_oracle(H_qm: MatrixLike, q0: QuantumPhasePoint, t: float) -> QuantumPhasePoint:
    """Exact propagation exp(-i H t) of the decoded amplitudes"""
    H = as_hermitian(H_qm)
    if H.N != q0.N:
        raise DimensionMismatchError("Hamiltonian matrix", q0.N, H.N)
    energies, vectors = eigh(H.entries)
    c = vectors @ (np.exp(-1j * energies * t) * (vectors.conj().T @ decode_state(q0)))
    return QuantumPhasePoint(SQRT2 * c.real, SQRT2 * c.imag, constraint_tol=q0.constraint_tol)
