"""Almost-classical observables: classical coefficients times products of z̄_i z_j

A term carries a real coefficient function a(x, p), a complex constant
prefactor c and an ordered list of index pairs; its value is
c * a(x, p) * prod_(i, j) conj(z_i) z_j with z = (X + iP)/sqrt(2).
Term lists are kept closed under conjugation so that the total is real.
"""

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from hybridflow.observables.classical import ClassicalObservable
from hybridflow.observables.hybrid import PhaseGradient
from hybridflow.observables.quadratic import MatrixLike, as_hermitian
from hybridflow.phase_space.state import HybridPoint
from hybridflow.utils.errors import DimensionMismatchError, IntegrityError

REALNESS_TOL = 1e-10
FACTOR_MATCH_TOL = 1e-14

Pair = Tuple[int, int]
MonomialKey = Tuple[Tuple[int, ...], Tuple[int, ...]]


def monomial_key(pairs: Sequence[Pair]) -> MonomialKey:
    """(sorted barred indices, sorted unbarred indices); equal keys mean equal products"""
    return tuple(sorted(i for i, _ in pairs)), tuple(sorted(j for _, j in pairs))


def _same_coefficient(a: ClassicalObservable, b: ClassicalObservable) -> bool:
    if a is b:
        return True
    return a.expr is not None and b.expr is not None and a.expr == b.expr


@dataclass(frozen=True, eq=False)
class AlmostClassicalTerm:
    coeff: ClassicalObservable
    pairs: Tuple[Pair, ...]
    factor: complex = 1.0

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((int(i), int(j)) for i, j in self.pairs))
        object.__setattr__(self, "factor", complex(self.factor))

    @property
    def key(self) -> MonomialKey:
        return monomial_key(self.pairs)

    def conjugate(self) -> "AlmostClassicalTerm":
        return AlmostClassicalTerm(
            self.coeff, tuple((j, i) for i, j in self.pairs), self.factor.conjugate()
        )

    def scaled(self, s: complex) -> "AlmostClassicalTerm":
        return AlmostClassicalTerm(self.coeff, self.pairs, self.factor * s)

    def is_self_conjugate(self) -> bool:
        barred, unbarred = self.key
        return barred == unbarred and abs(self.factor.imag) <= FACTOR_MATCH_TOL * max(
            1.0, abs(self.factor)
        )

    def is_conjugate_of(self, other: "AlmostClassicalTerm") -> bool:
        partner = other.conjugate()
        return (
            self.key == partner.key
            and _same_coefficient(self.coeff, other.coeff)
            and abs(self.factor - partner.factor) <= FACTOR_MATCH_TOL * max(1.0, abs(self.factor))
        )

    def product(self, z: np.ndarray) -> complex:
        """prod conj(z_i) z_j over the pairs (1 for an empty list)"""
        if not self.pairs:
            return 1.0 + 0.0j
        idx = np.array(self.pairs)
        return complex(np.prod(z[idx[:, 0]].conj() * z[idx[:, 1]]))

    def product_dzbar(self, z: np.ndarray) -> np.ndarray:
        """d/d conj(z_a) of the pair product, for every a"""
        out = np.zeros(z.size, dtype=complex)
        for k, (i, _) in enumerate(self.pairs):
            rest = self.pairs[:k] + self.pairs[k + 1 :]
            partial = np.prod([z[a].conjugate() * z[b] for a, b in rest]) if rest else 1.0
            out[i] += z[self.pairs[k][1]] * partial
        return out

    def value(self, x: np.ndarray, p: np.ndarray, z: np.ndarray) -> complex:
        return self.factor * self.coeff.value(x, p) * self.product(z)


def canonicalize(terms: Iterable[AlmostClassicalTerm]) -> List[AlmostClassicalTerm]:
    """Close a term list under conjugation

    A term whose conjugate partner is missing is replaced by half of itself
    plus half of its conjugate, which keeps the real part of the sum.
    """
    terms = [t for t in terms if t.factor != 0]
    used = [False] * len(terms)
    out: List[AlmostClassicalTerm] = []
    for i, term in enumerate(terms):
        if used[i]:
            continue
        used[i] = True
        if term.is_self_conjugate():
            out.append(term)
            continue
        for j in range(i + 1, len(terms)):
            if not used[j] and terms[j].is_conjugate_of(term):
                used[j] = True
                out.extend([term, terms[j]])
                break
        else:
            out.extend([term.scaled(0.5), term.conjugate().scaled(0.5)])
    return out


@dataclass(frozen=True, eq=False)
class AlmostClassicalObservable:
    """Sum of almost-classical terms on a hybrid space of dimensions (n, N)"""

    n: int
    N: int
    terms: Tuple[AlmostClassicalTerm, ...]
    name: str = ""

    def __post_init__(self):
        for term in self.terms:
            if term.coeff.n != self.n:
                raise DimensionMismatchError("term coefficient", self.n, term.coeff.n)
            for i, j in term.pairs:
                if not (0 <= i < self.N and 0 <= j < self.N):
                    raise IndexError(f"Pair index ({i}, {j}) out of range for N = {self.N}")
        object.__setattr__(self, "terms", tuple(canonicalize(self.terms)))

    @classmethod
    def from_quadratic(cls, obs: MatrixLike, n: int, name: str = "") -> "AlmostClassicalObservable":
        """Single-pair terms G_ij z̄_i z_j with constant coefficient 1"""
        G = as_hermitian(obs).entries
        one = ClassicalObservable.constant(1, n)
        terms = [
            AlmostClassicalTerm(one, ((i, j),), G[i, j])
            for i in range(G.shape[0])
            for j in range(G.shape[1])
            if G[i, j] != 0
        ]
        return cls(n, G.shape[0], tuple(terms), name=name)

    @classmethod
    def constraint(cls, n: int, N: int) -> "AlmostClassicalObservable":
        """C = sum_i z̄_i z_i"""
        one = ClassicalObservable.constant(1, n)
        terms = tuple(AlmostClassicalTerm(one, ((i, i),)) for i in range(N))
        return cls(n, N, terms, name="C")

    @property
    def term_count(self) -> int:
        return len(self.terms)

    @property
    def has_symbolic_coefficients(self) -> bool:
        return all(t.coeff.expr is not None for t in self.terms)

    def _check(self, h: HybridPoint) -> None:
        if h.n != self.n:
            raise DimensionMismatchError("classical dimension", self.n, h.n)
        if h.N != self.N:
            raise DimensionMismatchError("quantum dimension", self.N, h.N)

    def value(self, h: HybridPoint) -> float:
        self._check(h)
        z = h.qm.z
        parts = [t.value(h.cl.x, h.cl.p, z) for t in self.terms]
        total = complex(sum(parts))
        scale = max(1.0, sum(abs(v) for v in parts))
        if abs(total.imag) > REALNESS_TOL * scale:
            raise IntegrityError(f"Almost-classical value has imaginary part {total.imag:.3e}")
        return float(total.real)

    def gradient(self, h: HybridPoint) -> PhaseGradient:
        """Analytic gradient; dF/dX + i dF/dP = sqrt(2) dF/d conj(z)"""
        self._check(h)
        x, p, z = h.cl.x, h.cl.p, h.qm.z
        gx = np.zeros(self.n, dtype=complex)
        gp = np.zeros(self.n, dtype=complex)
        w = np.zeros(self.N, dtype=complex)
        for term in self.terms:
            prod = term.factor * term.product(z)
            cx, cp = term.coeff.gradient(x, p)
            gx += cx * prod
            gp += cp * prod
            w += term.factor * term.coeff.value(x, p) * term.product_dzbar(z)
        w *= np.sqrt(2.0)
        return PhaseGradient(gx.real, gp.real, w.real, w.imag)


def evaluate_almost_classical(obs: AlmostClassicalObservable, h: HybridPoint) -> float:
    """Value of an almost-classical observable at a hybrid point"""
    return obs.value(h)
