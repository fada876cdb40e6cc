"""Encoding, decoding and phase rotation of quantum phase points"""

from typing import Any, Dict, Optional

import numpy as np

from hybridflow.phase_space.state import (
    DEFAULT_CONSTRAINT_TOL,
    ClassicalPoint,
    HybridPoint,
    QuantumPhasePoint,
)
from hybridflow.utils.errors import DimensionMismatchError, NormalizationError

NORM_TOL = 1e-9
SQRT2 = np.sqrt(2.0)


def as_amplitudes(values) -> np.ndarray:
    """Complex vector from numbers or [re, im] pairs (config/JSON form)"""
    out = []
    for v in values:
        if isinstance(v, (list, tuple)):
            if len(v) != 2:
                raise ValueError(f"Complex entry must be [re, im], got {v!r}")
            out.append(complex(float(v[0]), float(v[1])))
        else:
            out.append(complex(v))
    return np.array(out, dtype=complex)


def encode_state(
    amplitudes, constraint_tol: Optional[float] = DEFAULT_CONSTRAINT_TOL
) -> QuantumPhasePoint:
    """Map amplitudes c_i to X_i = sqrt(2) Re c_i, P_i = sqrt(2) Im c_i

    The amplitudes must have unit norm within 1e-9; the residual is divided out so
    the encoded point sits on the constraint sphere.
    """
    c = np.asarray(amplitudes, dtype=complex).reshape(-1)
    norm = float(np.linalg.norm(c))
    if abs(norm - 1.0) > NORM_TOL:
        raise NormalizationError(norm, NORM_TOL)
    c = c / norm
    return QuantumPhasePoint(SQRT2 * c.real, SQRT2 * c.imag, constraint_tol=constraint_tol)


def decode_state(q: QuantumPhasePoint) -> np.ndarray:
    """c_i = (X_i + i P_i)/sqrt(2)"""
    return (q.X + 1j * q.P) / SQRT2


def constraint_value(q: QuantumPhasePoint) -> float:
    """C = (1/2) sum_i (X_i^2 + P_i^2)"""
    return q.constraint


def phase_rotate(q: QuantumPhasePoint, theta: float) -> QuantumPhasePoint:
    """Multiply every amplitude by exp(i theta)"""
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    X = q.X * cos_t - q.P * sin_t
    P = q.X * sin_t + q.P * cos_t
    return QuantumPhasePoint(X, P, constraint_tol=q.constraint_tol)


def overlap_probability(q: QuantumPhasePoint, amplitudes) -> float:
    """|<j|Psi>|^2 for a state |j> given by its amplitudes"""
    j = np.asarray(amplitudes, dtype=complex).reshape(-1)
    if j.size != q.N:
        raise DimensionMismatchError("projector state", q.N, j.size)
    return float(abs(np.vdot(j, decode_state(q))) ** 2)


def random_state(N: int, rng: np.random.Generator) -> QuantumPhasePoint:
    """Point drawn uniformly from the constraint sphere"""
    c = rng.standard_normal(N) + 1j * rng.standard_normal(N)
    return encode_state(c / np.linalg.norm(c))


def state_to_dict(h: HybridPoint) -> Dict[str, Any]:
    """JSON form {x, p, X, P}"""
    return {
        "x": h.cl.x.tolist(),
        "p": h.cl.p.tolist(),
        "X": h.qm.X.tolist(),
        "P": h.qm.P.tolist(),
    }


def state_from_dict(
    data: Dict[str, Any], constraint_tol: Optional[float] = DEFAULT_CONSTRAINT_TOL
) -> HybridPoint:
    """Inverse of state_to_dict"""
    return HybridPoint(
        ClassicalPoint(data.get("x", []), data.get("p", [])),
        QuantumPhasePoint(data["X"], data["P"], constraint_tol=constraint_tol),
    )
