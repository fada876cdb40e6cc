"""Harmonic-oscillator eigenfunctions on the position line and their quadrature"""

from typing import Tuple

import numpy as np
from scipy.special import roots_hermite

ORTHONORMALITY_TOL = 1e-10


def _alpha(mass: float, frequency: float) -> float:
    return float(np.sqrt(mass * frequency))


def hermite_functions(N: int, q, mass: float = 1.0, frequency: float = 1.0) -> np.ndarray:
    """Phi_0..Phi_{N-1} at the positions q, shape (N,) + q.shape

    Upward recurrence on the normalized functions,
    Phi_{n+1} = sqrt(2/(n+1)) a q Phi_n - sqrt(n/(n+1)) Phi_{n-1}, a = sqrt(M Omega).
    """
    q = np.asarray(q, dtype=float)
    a = _alpha(mass, frequency)
    out = np.zeros((N,) + q.shape)
    if N == 0:
        return out
    out[0] = (a * a / np.pi) ** 0.25 * np.exp(-0.5 * (a * q) ** 2)
    if N > 1:
        out[1] = np.sqrt(2.0) * a * q * out[0]
    for k in range(1, N - 1):
        out[k + 1] = np.sqrt(2.0 / (k + 1)) * a * q * out[k] - np.sqrt(k / (k + 1)) * out[k - 1]
    return out


def hermite_eval(i: int, q: float, mass: float = 1.0, frequency: float = 1.0) -> float:
    """Value of the i-th orthonormal oscillator eigenfunction at q"""
    if i < 0:
        raise ValueError(f"Basis index must be >= 0, got {i}")
    return float(hermite_functions(i + 1, q, mass, frequency)[i])


def hermite_derivatives(
    N: int, q, mass: float = 1.0, frequency: float = 1.0
) -> Tuple[np.ndarray, np.ndarray]:
    """(Phi, Phi') for the first N functions

    Phi_n' = a (sqrt(n/2) Phi_{n-1} - sqrt((n+1)/2) Phi_{n+1}).
    """
    a = _alpha(mass, frequency)
    phi = hermite_functions(N + 1, q, mass, frequency)
    dphi = np.empty_like(phi[:N])
    for k in range(N):
        lower = np.sqrt(k / 2.0) * phi[k - 1] if k > 0 else 0.0
        dphi[k] = a * (lower - np.sqrt((k + 1) / 2.0) * phi[k + 1])
    return phi[:N], dphi


def gauss_hermite_rule(
    nodes: int, mass: float = 1.0, frequency: float = 1.0
) -> Tuple[np.ndarray, np.ndarray]:
    """Positions and weights with sum_k w_k f(q_k) ~ integral of f over the line

    Exact for f = Phi_i Phi_j poly(q) as long as the polynomial degree stays below
    2 * nodes - 1.
    """
    a = _alpha(mass, frequency)
    t, w = roots_hermite(nodes)
    return t / a, w * np.exp(t * t) / a


def overlap_matrix(N: int, nodes: int, mass: float = 1.0, frequency: float = 1.0) -> np.ndarray:
    """Quadrature of Phi_i Phi_j, i, j < N"""
    q, w = gauss_hermite_rule(nodes, mass, frequency)
    phi = hermite_functions(N, q, mass, frequency)
    return (phi * w) @ phi.T


def orthonormality_defect(
    N: int, nodes: int, mass: float = 1.0, frequency: float = 1.0
) -> float:
    """max |<Phi_i|Phi_j> - delta_ij| under the quadrature rule"""
    return float(np.max(np.abs(overlap_matrix(N, nodes, mass, frequency) - np.eye(N))))
