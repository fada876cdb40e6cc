"""Hybrid Hamiltonian model"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from hybridflow.observables.classical import ClassicalObservable
from hybridflow.observables.hybrid import HybridObservable
from hybridflow.observables.quadratic import HermitianMatrix
from hybridflow.phase_space.state import BasisSet, HybridPoint
from hybridflow.utils.errors import DimensionMismatchError, IntegrityError


@dataclass(frozen=True, eq=False)
class ModelSpec:
    """H_Sigma = H_cl(x, p) + <Psi|H_qm|Psi> + I(x, p; X, P)"""

    H_cl: ClassicalObservable
    H_qm: HermitianMatrix
    I: HybridObservable
    basis: Optional[BasisSet] = None
    name: str = "model"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.H_cl.n != self.I.n:
            raise DimensionMismatchError("interaction classical dimension", self.H_cl.n, self.I.n)
        if self.H_qm.N != self.I.N:
            raise DimensionMismatchError("interaction quantum dimension", self.H_qm.N, self.I.N)
        if self.basis is None:
            object.__setattr__(self, "basis", BasisSet.abstract(self.H_qm.N))
        elif self.basis.N != self.H_qm.N:
            raise DimensionMismatchError("basis dimension", self.H_qm.N, self.basis.N)

    @property
    def n(self) -> int:
        return self.H_cl.n

    @property
    def N(self) -> int:
        return self.H_qm.N

    @cached_property
    def hamiltonian(self) -> HybridObservable:
        """The total Hamiltonian as a single hybrid observable"""
        H = HybridObservable.from_classical(self.H_cl, self.N) + HybridObservable.from_quadratic(
            self.H_qm, self.n, name="H_qm"
        )
        return H + self.I

    def check_point(self, h: HybridPoint) -> None:
        if h.n != self.n:
            raise DimensionMismatchError("classical dimension", self.n, h.n)
        if h.N != self.N:
            raise DimensionMismatchError("quantum dimension", self.N, h.N)


def total_hamiltonian(model: ModelSpec, h: HybridPoint) -> float:
    """Value of H_Sigma at a hybrid point"""
    model.check_point(h)
    value = model.hamiltonian.value(h)
    if not np.isfinite(value):
        raise IntegrityError(f"Hamiltonian of {model.name!r} is not finite: {value}")
    return value
