"""Position/momentum matrices in the truncated oscillator basis and Weyl ordering"""

from itertools import permutations
from typing import Dict, Tuple

import numpy as np

from hybridflow.observables.quadratic import HermitianMatrix
from hybridflow.phase_space.state import BasisKind, BasisSet
from hybridflow.utils.errors import UnsupportedError


def lowering_operator(N: int) -> np.ndarray:
    """Truncated annihilation operator, a|n> = sqrt(n)|n-1>"""
    return np.diag(np.sqrt(np.arange(1, N, dtype=float)), 1)


def position_momentum_matrices(basis: BasisSet) -> Tuple[HermitianMatrix, HermitianMatrix]:
    """X = (a + a^+)/sqrt(2 M Omega), P = i sqrt(M Omega / 2)(a^+ - a)

    The canonical commutator [X, P] = i holds only on the upper-left
    (N-1) x (N-1) block of the truncated matrices.
    """
    if basis.kind != BasisKind.HARMONIC:
        raise UnsupportedError(
            f"Position/momentum matrices need a {BasisKind.HARMONIC.value} basis, "
            f"got {basis.kind.value}"
        )
    a = lowering_operator(basis.N)
    m_omega = basis.mass * basis.frequency
    X = (a + a.T) / np.sqrt(2.0 * m_omega)
    P = 1j * np.sqrt(m_omega / 2.0) * (a.T - a)
    return HermitianMatrix(X), HermitianMatrix(P)


def oscillator_hamiltonian(basis: BasisSet) -> HermitianMatrix:
    """diag(Omega (j + 1/2)), j = 0..N-1"""
    j = np.arange(basis.N, dtype=float)
    return HermitianMatrix.diagonal(basis.frequency * (j + 0.5))


def weyl_symmetrize(word: str, X: np.ndarray, P: np.ndarray) -> np.ndarray:
    """Average of all distinct orderings of an operator word in the letters X and P

    ``"XP"`` gives (XP + PX)/2, ``"XXP"`` gives (XXP + XPX + PXX)/3.
    """
    word = word.upper()
    if not word:
        return np.eye(X.shape[0], dtype=complex)
    if set(word) - {"X", "P"}:
        raise ValueError(f"Operator word may only contain X and P, got {word!r}")
    letters: Dict[str, np.ndarray] = {"X": np.asarray(X), "P": np.asarray(P)}
    orderings = sorted(set(permutations(word)))
    total = np.zeros_like(letters["X"], dtype=complex)
    for ordering in orderings:
        product = letters[ordering[0]]
        for letter in ordering[1:]:
            product = product @ letters[letter]
        total = total + product
    return total / len(orderings)
