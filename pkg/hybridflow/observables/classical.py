"""Classical observables f(x, p)"""

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
import sympy as sp

FD_REL_STEP = 1e-6

ScalarFn = Callable[[np.ndarray, np.ndarray], float]
GradFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


def classical_symbols(n: int) -> Tuple[Tuple[sp.Symbol, ...], Tuple[sp.Symbol, ...]]:
    """Symbols x_1..x_n and p_1..p_n used in expression strings"""
    xs = tuple(sp.Symbol(f"x_{k + 1}", real=True) for k in range(n))
    ps = tuple(sp.Symbol(f"p_{k + 1}", real=True) for k in range(n))
    return xs, ps


def parse_expression(text: Union[str, float, int, sp.Expr], n: int) -> sp.Expr:
    """Parse an expression string in the symbols x_k, p_k"""
    if isinstance(text, sp.Expr):
        return text
    xs, ps = classical_symbols(n)
    local = {s.name: s for s in xs + ps}
    expr = sp.sympify(text, locals=local)
    unknown = expr.free_symbols - set(xs) - set(ps)
    if unknown:
        names = ", ".join(sorted(s.name for s in unknown))
        raise ValueError(f"Unknown symbols in expression {text!r}: {names}")
    return expr


def fd_step(value: float) -> float:
    """Central-difference step h = 1e-6 * max(1, |coordinate|)"""
    return FD_REL_STEP * max(1.0, abs(value))


def central_gradient(fn: Callable[[np.ndarray], float], y: np.ndarray) -> np.ndarray:
    """Central finite-difference gradient of a scalar function of a flat vector"""
    y = np.array(y, dtype=float)
    grad = np.empty_like(y)
    for k in range(y.size):
        h = fd_step(y[k])
        yp, ym = y.copy(), y.copy()
        yp[k] += h
        ym[k] -= h
        grad[k] = (fn(yp) - fn(ym)) / (2.0 * h)
    return grad


@dataclass(frozen=True, eq=False)
class ClassicalObservable:
    """Differentiable scalar function of the classical coordinates

    Gradients are analytic when ``grad_x``/``grad_p`` are given (or when the
    observable was built from a sympy expression); otherwise central finite
    differences are used.
    """

    f: ScalarFn
    n: int
    grad_x: Optional[GradFn] = None
    grad_p: Optional[GradFn] = None
    expr: Optional[sp.Expr] = None
    name: str = ""

    @classmethod
    def from_expression(
        cls, expr: Union[str, float, int, sp.Expr], n: int, name: str = ""
    ) -> "ClassicalObservable":
        """Compile an expression in x_1..x_n, p_1..p_n with symbolic gradients"""
        expr = parse_expression(expr, n)
        if n == 0:
            constant = float(expr)
            empty = np.zeros(0)
            return cls(
                f=lambda x, p: constant,
                n=0,
                grad_x=lambda x, p: empty,
                grad_p=lambda x, p: empty,
                expr=expr,
                name=name or str(expr),
            )
        xs, ps = classical_symbols(n)
        f = sp.lambdify((xs, ps), expr, "numpy")
        gx = sp.lambdify((xs, ps), [sp.diff(expr, s) for s in xs], "numpy")
        gp = sp.lambdify((xs, ps), [sp.diff(expr, s) for s in ps], "numpy")
        return cls(
            f=lambda x, p: float(f(x, p)),
            n=n,
            grad_x=lambda x, p: np.array(gx(x, p), dtype=float).reshape(n),
            grad_p=lambda x, p: np.array(gp(x, p), dtype=float).reshape(n),
            expr=expr,
            name=name or str(expr),
        )

    @classmethod
    def constant(cls, value: float, n: int) -> "ClassicalObservable":
        return cls.from_expression(sp.sympify(value), n)

    @classmethod
    def coordinate(cls, kind: str, index: int, n: int) -> "ClassicalObservable":
        """The canonical coordinate x_k or p_k (1-based index)"""
        if kind not in ("x", "p"):
            raise ValueError(f"Coordinate kind must be 'x' or 'p', got {kind!r}")
        return cls.from_expression(f"{kind}_{index}", n)

    @property
    def has_analytic_gradient(self) -> bool:
        return self.grad_x is not None and self.grad_p is not None

    def value(self, x: np.ndarray, p: np.ndarray) -> float:
        return float(self.f(np.asarray(x, dtype=float), np.asarray(p, dtype=float)))

    def __call__(self, x: np.ndarray, p: np.ndarray) -> float:
        return self.value(x, p)

    def gradient(self, x: np.ndarray, p: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """(df/dx, df/dp)"""
        x = np.asarray(x, dtype=float)
        p = np.asarray(p, dtype=float)
        if self.has_analytic_gradient:
            return (
                np.asarray(self.grad_x(x, p), dtype=float),  # type: ignore[misc]
                np.asarray(self.grad_p(x, p), dtype=float),  # type: ignore[misc]
            )
        return self.fd_gradient(x, p)

    def fd_gradient(self, x: np.ndarray, p: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        n = self.n
        grad = central_gradient(lambda y: self.value(y[:n], y[n:]), np.concatenate([x, p]))
        return grad[:n], grad[n:]

    def gradient_mismatch(self, points: Sequence[Tuple[np.ndarray, np.ndarray]]) -> float:
        """Largest relative deviation of the analytic gradient from finite differences"""
        worst = 0.0
        for x, p in points:
            analytic = np.concatenate(self.gradient(x, p))
            numeric = np.concatenate(self.fd_gradient(np.asarray(x), np.asarray(p)))
            scale = max(1.0, float(np.max(np.abs(numeric))) if numeric.size else 1.0)
            if analytic.size:
                worst = max(worst, float(np.max(np.abs(analytic - numeric))) / scale)
        return worst


def add_classical(a: ClassicalObservable, b: ClassicalObservable) -> ClassicalObservable:
    """Sum of two classical observables, symbolic when both are"""
    if a.n != b.n:
        raise ValueError(f"Cannot add classical observables with n = {a.n} and n = {b.n}")
    if a.expr is not None and b.expr is not None:
        return ClassicalObservable.from_expression(a.expr + b.expr, a.n)
    grad_x = grad_p = None
    if a.has_analytic_gradient and b.has_analytic_gradient:
        grad_x = lambda x, p: a.gradient(x, p)[0] + b.gradient(x, p)[0]  # noqa: E731
        grad_p = lambda x, p: a.gradient(x, p)[1] + b.gradient(x, p)[1]  # noqa: E731
    return ClassicalObservable(
        f=lambda x, p: a.value(x, p) + b.value(x, p),
        n=a.n,
        grad_x=grad_x,
        grad_p=grad_p,
        name=f"({a.name}) + ({b.name})",
    )


def scale_classical(obs: ClassicalObservable, factor: float) -> ClassicalObservable:
    """factor * obs, symbolic when obs is"""
    factor = float(factor)
    if obs.expr is not None:
        return ClassicalObservable.from_expression(sp.Float(factor) * obs.expr, obs.n)
    grad_x = grad_p = None
    if obs.has_analytic_gradient:
        grad_x = lambda x, p: factor * obs.gradient(x, p)[0]  # noqa: E731
        grad_p = lambda x, p: factor * obs.gradient(x, p)[1]  # noqa: E731
    return ClassicalObservable(
        f=lambda x, p: factor * obs.value(x, p),
        n=obs.n,
        grad_x=grad_x,
        grad_p=grad_p,
        name=f"{factor:g} * ({obs.name})",
    )
