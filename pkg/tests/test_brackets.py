"""Unit tests for classical, quantum and hybrid brackets"""

import numpy as np
import pytest

from hybridflow.brackets import (
    bracket_closure,
    classical_bracket,
    closure_check,
    commutator_check,
    commutator_residual,
    finite_difference_bracket,
    hybrid_bracket,
    quantum_bracket,
    random_almost_classical,
    random_hermitian,
    random_hybrid_point,
)
from hybridflow.observables import (
    AlmostClassicalObservable,
    AlmostClassicalTerm,
    ClassicalObservable,
    HermitianMatrix,
    HybridObservable,
    position_momentum_matrices,
    scale_classical,
)
from hybridflow.phase_space import (
    BasisSet,
    ClassicalPoint,
    HybridPoint,
    encode_state,
    random_state,
)
from hybridflow.utils.errors import UnsupportedError

SIGMA_X = HermitianMatrix(np.array([[0, 1], [1, 0]]))
SIGMA_Y = HermitianMatrix(np.array([[0, -1j], [1j, 0]]))


@pytest.fixture
def rng():
    return np.random.default_rng(42)


def coordinate(expr):
    return ClassicalObservable.from_expression(expr, 1)


def test_canonical_pair():
    """Test {x, p} = 1 and {x, x} = 0"""
    pt = ClassicalPoint([0.3], [-1.1])
    assert classical_bracket(coordinate("x_1"), coordinate("p_1"), pt) == pytest.approx(1.0)
    assert classical_bracket(coordinate("x_1"), coordinate("x_1"), pt) == 0.0


def test_classical_bracket_of_squares():
    """Test {x^2, p^2} = 4 x p at (1, 2)"""
    pt = ClassicalPoint([1.0], [2.0])
    assert classical_bracket(coordinate("x_1**2"), coordinate("p_1**2"), pt) == pytest.approx(8.0)


def test_constraint_commutes_with_quadratic_forms(rng):
    """Test that the identity form has vanishing bracket with any G"""
    q = random_state(4, rng)
    G = random_hermitian(4, rng)
    assert quantum_bracket(HermitianMatrix.identity(4), G, q) == pytest.approx(0.0, abs=1e-14)


def test_position_momentum_bracket_in_ground_state():
    """Test {X, P} in the two-level ground state"""
    X, P = position_momentum_matrices(BasisSet.harmonic(2))
    assert quantum_bracket(X, P, encode_state([1, 0])) == pytest.approx(1.0)


def test_pauli_bracket():
    """Test {sigma_x, sigma_y} = 2 at spin up"""
    q = encode_state([1, 0])
    assert quantum_bracket(SIGMA_X, SIGMA_Y, q) == pytest.approx(2.0)
    assert commutator_residual(SIGMA_X, SIGMA_Y, q) < 1e-15


def test_commutator_residual_of_equal_operators(rng):
    """Test that F with itself gives zero residual"""
    F = random_hermitian(5, rng)
    assert commutator_residual(F, F, random_state(5, rng)) < 1e-14


def test_bracket_between_sectors_vanishes():
    """Test a classical-sector observable against a quantum-sector one"""
    A = HybridObservable.from_classical(coordinate("x_1*p_1"), 2)
    B = HybridObservable.from_quadratic(SIGMA_X, 1)
    h = HybridPoint(ClassicalPoint([0.4], [0.9]), encode_state([0.6, 0.8j]))
    assert hybrid_bracket(A, B, h).value == 0.0


def test_bracket_reduces_to_classical_sector():
    """Test that two classical observables give the classical bracket"""
    f, g = coordinate("x_1**2"), coordinate("p_1**2")
    h = HybridPoint(ClassicalPoint([1.0], [2.0]), encode_state([1, 0]))
    result = hybrid_bracket(
        HybridObservable.from_classical(f, 2), HybridObservable.from_classical(g, 2), h
    )
    assert result.value == pytest.approx(classical_bracket(f, g, h.cl))
    assert result.quantum_part == 0.0


def test_mixed_bracket_matches_finite_differences(rng):
    """Test x sigma_x against p sigma_y over all coordinates"""
    A = HybridObservable.coupling(coordinate("x_1"), SIGMA_X)
    B = HybridObservable.coupling(coordinate("p_1"), SIGMA_Y)
    h = HybridPoint(ClassicalPoint([0.7], [-0.3]), random_state(2, rng))
    exact = hybrid_bracket(A, B, h)
    numeric = finite_difference_bracket(A, B, h)
    assert exact.value == pytest.approx(numeric.value, abs=1e-6)
    assert exact.classical_part == pytest.approx(numeric.classical_part, abs=1e-6)


def test_commutator_check_default_run():
    """Test the seeded commutator equivalence run"""
    result = commutator_check(seed=42, N=8, pairs=200)
    assert result["max_commutator_residual"] < 1e-10
    assert result["passed"]


def test_commutator_check_is_reproducible():
    """Test that the same seed gives identical results"""
    assert commutator_check(seed=3, N=4, pairs=10) == commutator_check(seed=3, N=4, pairs=10)


def test_closure_with_constant_coefficients_is_quantum_bracket(rng):
    """Test closure of constant-coefficient observables"""
    F, G = random_hermitian(3, rng), random_hermitian(3, rng)
    A = AlmostClassicalObservable.from_quadratic(F, 1)
    B = AlmostClassicalObservable.from_quadratic(G, 1)
    closed = bracket_closure(A, B)
    for _ in range(5):
        h = random_hybrid_point(1, 3, rng)
        assert closed.value(h) == pytest.approx(quantum_bracket(F, G, h.qm), abs=1e-12)


def test_closure_matches_numeric_bracket(rng):
    """Test the symbolic closure against the gradient bracket"""
    A = random_almost_classical(1, 3, rng)
    B = random_almost_classical(1, 3, rng)
    closed = bracket_closure(A, B)
    for _ in range(5):
        h = random_hybrid_point(1, 3, rng)
        numeric = hybrid_bracket(A, B, h).value
        assert closed.value(h) == pytest.approx(numeric, rel=1e-6, abs=1e-9)


def test_constraint_brackets_vanish(rng):
    """Test {C, G} = 0 for almost-classical G"""
    C = AlmostClassicalObservable.constraint(1, 3)
    G = random_almost_classical(1, 3, rng)
    for _ in range(5):
        h = random_hybrid_point(1, 3, rng)
        assert abs(hybrid_bracket(C, G, h).value) < 1e-10


def test_closure_needs_symbolic_coefficients():
    """Test that numeric-only coefficients are rejected"""
    numeric = ClassicalObservable(f=lambda x, p: float(x[0]), n=1)
    A = AlmostClassicalObservable(1, 2, (AlmostClassicalTerm(numeric, ((0, 0),)),))
    with pytest.raises(UnsupportedError):
        bracket_closure(A, A)


def test_closure_check_run():
    """Test the seeded closure run"""
    result = closure_check(seed=42, n=1, N=3, pairs=3, points=4)
    assert result["passed"]
    assert len(result["term_counts"]) == 3


def random_polynomial(rng, n=2):
    """Random quadratic polynomial in x_1..x_n, p_1..p_n"""
    c = np.round(rng.standard_normal(4), 3)
    k = int(rng.integers(1, n + 1))
    return ClassicalObservable.from_expression(
        f"{c[0]}*x_1*p_{k} + {c[1]}*x_{k}**2 + {c[2]}*p_1 + {c[3]}", n
    )


def random_coupling(rng, n=2, N=3):
    """Hybrid observable with classical, quantum and coupled parts"""
    return (
        HybridObservable.coupling(random_polynomial(rng, n), random_hermitian(N, rng))
        + HybridObservable.from_quadratic(random_hermitian(N, rng), n)
        + HybridObservable.from_classical(random_polynomial(rng, n), N)
    )


class ProductField:
    """Pointwise product of two observables, evaluated only"""

    def __init__(self, a, b):
        self.a, self.b = a, b

    def value(self, h):
        return self.a.value(h) * self.b.value(h)


def test_classical_bracket_is_antisymmetric(rng):
    """Test {f, g} = -{g, f} for random polynomials"""
    for _ in range(20):
        f, g = random_polynomial(rng), random_polynomial(rng)
        pt = ClassicalPoint(rng.standard_normal(2), rng.standard_normal(2))
        assert abs(classical_bracket(f, g, pt) + classical_bracket(g, f, pt)) <= 1e-12


def test_hybrid_bracket_is_antisymmetric(rng):
    """Test {A, B} = -{B, A} for hybrid and almost-classical observables"""
    for _ in range(10):
        h = random_hybrid_point(2, 3, rng)
        A, B = random_coupling(rng), random_coupling(rng)
        assert abs(hybrid_bracket(A, B, h).value + hybrid_bracket(B, A, h).value) <= 1e-12
        F, G = random_almost_classical(2, 3, rng), random_almost_classical(2, 3, rng)
        assert abs(hybrid_bracket(F, G, h).value + hybrid_bracket(G, F, h).value) <= 1e-12


def test_hybrid_bracket_is_bilinear(rng):
    """Test {a A + b B, C} = a {A, C} + b {B, C}"""
    for _ in range(10):
        fa, fb = random_polynomial(rng), random_polynomial(rng)
        Ga, Gb = random_hermitian(3, rng), random_hermitian(3, rng)
        C = random_coupling(rng)
        a, b = rng.standard_normal(2)
        h = random_hybrid_point(2, 3, rng)
        A = HybridObservable.coupling(fa, Ga)
        B = HybridObservable.coupling(fb, Gb)
        scaled_a = HybridObservable.coupling(scale_classical(fa, a), Ga)
        scaled_b = HybridObservable.coupling(scale_classical(fb, b), Gb)
        lhs = hybrid_bracket(scaled_a + scaled_b, C, h).value
        rhs = a * hybrid_bracket(A, C, h).value + b * hybrid_bracket(B, C, h).value
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def test_hybrid_bracket_obeys_leibniz_rule(rng):
    """Test {A B, C} = A {B, C} + {A, C} B with the product differentiated numerically"""
    for _ in range(5):
        A, B, C = random_coupling(rng, 1, 2), random_coupling(rng, 1, 2), random_coupling(rng, 1, 2)
        h = random_hybrid_point(1, 2, rng)
        lhs = finite_difference_bracket(ProductField(A, B), C, h).value
        rhs = (
            A.value(h) * hybrid_bracket(B, C, h).value
            + hybrid_bracket(A, C, h).value * B.value(h)
        )
        assert lhs == pytest.approx(rhs, abs=1e-6 * max(1.0, abs(rhs)))
