"""Symbolic hybrid bracket of almost-classical observables"""

from collections import OrderedDict
from typing import Dict, Tuple

import sympy as sp

from hybridflow.observables.almost_classical import (
    AlmostClassicalObservable,
    AlmostClassicalTerm,
    MonomialKey,
    Pair,
    monomial_key,
)
from hybridflow.observables.classical import ClassicalObservable, classical_symbols
from hybridflow.utils.errors import DimensionMismatchError, UnsupportedError
from hybridflow.utils.logger import get_logger

logger = get_logger(__name__)

ZERO_FACTOR_TOL = 1e-15


class _TermAccumulator:
    """Collects (coefficient expression, monomial) -> complex prefactor"""

    def __init__(self, n: int):
        self.n = n
        self.factors: "OrderedDict[Tuple[MonomialKey, sp.Expr], complex]" = OrderedDict()

    def add(self, expr: sp.Expr, factor: complex, pairs: Tuple[Pair, ...]) -> None:
        expr = sp.expand(expr)
        if expr == 0 or factor == 0:
            return
        key = (monomial_key(pairs), expr)
        self.factors[key] = self.factors.get(key, 0.0) + factor

    def terms(self) -> Tuple[AlmostClassicalTerm, ...]:
        compiled: Dict[sp.Expr, ClassicalObservable] = {}
        scale = max((abs(f) for f in self.factors.values()), default=0.0)
        out = []
        for ((barred, unbarred), expr), factor in self.factors.items():
            if abs(factor) <= ZERO_FACTOR_TOL * max(1.0, scale):
                continue
            if expr not in compiled:
                compiled[expr] = ClassicalObservable.from_expression(expr, self.n)
            out.append(AlmostClassicalTerm(compiled[expr], tuple(zip(barred, unbarred)), factor))
        return tuple(out)


def _classical_part(fa: sp.Expr, fb: sp.Expr, n: int) -> sp.Expr:
    xs, ps = classical_symbols(n)
    return sum(
        (sp.diff(fa, x) * sp.diff(fb, p) - sp.diff(fa, p) * sp.diff(fb, x) for x, p in zip(xs, ps)),
        sp.Integer(0),
    )


def bracket_closure(
    A: AlmostClassicalObservable, B: AlmostClassicalObservable
) -> AlmostClassicalObservable:
    """{A, B}_x expressed again as an almost-classical observable

    Classical part: {a, b}_CL times the concatenated pair products.
    Quantum part: Leibniz expansion over one pair of each term with
    {z̄_i z_j, z̄_k z_l}_QM = -i (delta_jk z̄_i z_l - delta_li z̄_k z_j).
    """
    if (A.n, A.N) != (B.n, B.N):
        raise DimensionMismatchError("almost-classical operands", (A.n, A.N), (B.n, B.N))
    if not (A.has_symbolic_coefficients and B.has_symbolic_coefficients):
        raise UnsupportedError("bracket_closure needs symbolic coefficient functions")

    acc = _TermAccumulator(A.n)
    for ta in A.terms:
        for tb in B.terms:
            fa, fb = ta.coeff.expr, tb.coeff.expr
            factor = ta.factor * tb.factor
            acc.add(_classical_part(fa, fb, A.n), factor, ta.pairs + tb.pairs)

            product = fa * fb
            for a_idx, (i, j) in enumerate(ta.pairs):
                rest_a = ta.pairs[:a_idx] + ta.pairs[a_idx + 1 :]
                for b_idx, (k, l) in enumerate(tb.pairs):
                    rest_b = tb.pairs[:b_idx] + tb.pairs[b_idx + 1 :]
                    if j == k:
                        acc.add(product, -1j * factor, rest_a + rest_b + ((i, l),))
                    if l == i:
                        acc.add(product, 1j * factor, rest_a + rest_b + ((k, j),))

    result = AlmostClassicalObservable(
        A.n, A.N, acc.terms(), name=f"{{{A.name or 'A'}, {B.name or 'B'}}}"
    )
    logger.debug(
        f"Closure of {A.term_count} x {B.term_count} terms produced {result.term_count} terms"
    )
    return result
