"""Unit tests for classical, quantum, hybrid and almost-classical observables"""

import numpy as np
import pytest

from hybridflow.observables import (
    AlmostClassicalObservable,
    AlmostClassicalTerm,
    ClassicalObservable,
    HermitianMatrix,
    HybridObservable,
    QuadraticObservable,
    evaluate_almost_classical,
    evaluate_hybrid,
    expectation,
    position_momentum_matrices,
    scale_classical,
    weyl_symmetrize,
)
from hybridflow.phase_space import BasisSet, ClassicalPoint, HybridPoint, encode_state
from hybridflow.utils.errors import DimensionMismatchError, IntegrityError, UnsupportedError

SIGMA_X = [[0, 1], [1, 0]]
PLUS = [1 / np.sqrt(2), 1 / np.sqrt(2)]
PLUS_I = [1 / np.sqrt(2), 1j / np.sqrt(2)]


def hybrid(x, p, c):
    return HybridPoint(ClassicalPoint([x], [p]), encode_state(c))


def test_classical_expression_gradient():
    """Test symbolic gradients of a classical observable"""
    f = ClassicalObservable.from_expression("x_1**2 * p_1", 1)
    gx, gp = f.gradient(np.array([2.0]), np.array([3.0]))
    assert f.value([2.0], [3.0]) == pytest.approx(12.0)
    np.testing.assert_allclose(gx, [12.0])
    np.testing.assert_allclose(gp, [4.0])
    assert f.gradient_mismatch([(np.array([0.3]), np.array([-1.2]))]) < 1e-8


def test_unknown_symbol_is_rejected():
    """Test expression parsing of unknown symbols"""
    with pytest.raises(ValueError):
        ClassicalObservable.from_expression("x_1 + y", 1)


def test_scaled_classical_observable():
    """Test symbolic scaling keeps analytic gradients"""
    f = scale_classical(ClassicalObservable.from_expression("x_1 * p_1", 1), 0.5)
    assert f.value([2.0], [3.0]) == pytest.approx(3.0)
    assert f.has_analytic_gradient


def test_non_hermitian_matrix_rejected():
    """Test the Hermiticity check"""
    with pytest.raises(IntegrityError):
        HermitianMatrix(np.array([[0, 1], [0, 0]]))


def test_expectation_examples():
    """Test identity, eigenstate and Pauli-x expectations"""
    q = encode_state([0.6, 0.8j])
    assert expectation(HermitianMatrix.identity(2), q) == pytest.approx(1.0)
    assert expectation(HermitianMatrix.diagonal([1, 2]), encode_state([0, 1])) == pytest.approx(2.0)
    assert expectation(QuadraticObservable(HermitianMatrix(SIGMA_X)), encode_state(PLUS)) == (
        pytest.approx(1.0)
    )


def test_expectation_dimension_mismatch():
    """Test dimension checking of expectations"""
    with pytest.raises(DimensionMismatchError):
        expectation(HermitianMatrix.identity(3), encode_state([1, 0]))


def test_hybrid_identity_scaled_by_x():
    """Test M(x, p) = x * identity"""
    A = HybridObservable.coupling(
        ClassicalObservable.from_expression("x_1", 1), HermitianMatrix.identity(2)
    )
    assert evaluate_hybrid(A, hybrid(3.0, 0.0, PLUS_I)) == pytest.approx(3.0)


def test_hybrid_constant_matrix_matches_expectation():
    """Test that a constant M reduces to an expectation value"""
    G = HermitianMatrix.diagonal([0.5, -1.5])
    h = hybrid(0.4, 0.1, [0.6, 0.8])
    assert evaluate_hybrid(HybridObservable.from_quadratic(G, 1), h) == pytest.approx(
        expectation(G, h.qm)
    )


def test_hybrid_pauli_coupling():
    """Test M(x, p) = x * sigma_x at x = 2 and the plus state"""
    A = HybridObservable.coupling(
        ClassicalObservable.from_expression("x_1", 1), HermitianMatrix(SIGMA_X)
    )
    assert evaluate_hybrid(A, hybrid(2.0, 0.0, PLUS)) == pytest.approx(4.0)


def test_non_hermitian_hybrid_matrix_detected():
    """Test the evaluation-time Hermiticity check"""
    A = HybridObservable(n=1, N=2, matrix_fn=lambda x, p: np.array([[0, x[0]], [0, 0]]))
    with pytest.raises(IntegrityError):
        evaluate_hybrid(A, hybrid(1.0, 0.0, PLUS))


def test_hybrid_gradient_matches_finite_differences():
    """Test analytic hybrid gradients against finite differences"""
    coeff = ClassicalObservable.from_expression("x_1**2 + x_1*p_1", 1)
    A = HybridObservable.coupling(coeff, HermitianMatrix(SIGMA_X))
    fd = HybridObservable(n=1, N=2, matrix_fn=A.matrix_fn)
    h = hybrid(0.7, -0.3, [0.6, 0.8j])
    exact, approx = A.gradient(h), fd.gradient(h)
    np.testing.assert_allclose(exact.x, approx.x, atol=1e-7)
    np.testing.assert_allclose(exact.p, approx.p, atol=1e-7)
    np.testing.assert_allclose(exact.X, approx.X)


def test_sum_of_hybrid_observables():
    """Test addition of hybrid observables"""
    H_cl = HybridObservable.from_classical(ClassicalObservable.from_expression("p_1**2/2", 1), 2)
    H_qm = HybridObservable.from_quadratic(HermitianMatrix.diagonal([1, 2]), 1)
    total = H_cl + H_qm
    assert evaluate_hybrid(total, hybrid(0.0, 2.0, [0, 1])) == pytest.approx(4.0)


def test_almost_classical_constant_term():
    """Test a term with no pairs"""
    five = ClassicalObservable.constant(5, 1)
    A = AlmostClassicalObservable(1, 2, (AlmostClassicalTerm(five, ()),))
    assert evaluate_almost_classical(A, hybrid(0.2, 0.1, PLUS_I)) == pytest.approx(5.0)


def test_almost_classical_pair_products():
    """Test single and double occupation products"""
    one = ClassicalObservable.constant(1, 1)
    h = hybrid(0.0, 0.0, PLUS_I)
    single = AlmostClassicalObservable(1, 2, (AlmostClassicalTerm(one, ((0, 0),)),))
    double = AlmostClassicalObservable(1, 2, (AlmostClassicalTerm(one, ((0, 0), (1, 1))),))
    assert evaluate_almost_classical(single, h) == pytest.approx(0.5)
    assert evaluate_almost_classical(double, h) == pytest.approx(0.25)


def test_almost_classical_off_diagonal_term_is_closed_under_conjugation():
    """Test that a lone off-diagonal term is made real"""
    one = ClassicalObservable.constant(1, 1)
    A = AlmostClassicalObservable(1, 2, (AlmostClassicalTerm(one, ((0, 1),), 2.0),))
    assert A.term_count == 2
    # 2 Re(conj(z_1) z_2) at z = (1, 1)/sqrt(2)
    assert evaluate_almost_classical(A, hybrid(0.0, 0.0, PLUS)) == pytest.approx(1.0)


def test_almost_classical_from_quadratic_matches_expectation():
    """Test the quadratic-form embedding"""
    G = HermitianMatrix(np.array([[1.0, 0.5j], [-0.5j, -2.0]]))
    h = hybrid(0.0, 0.0, [0.6, 0.8j])
    A = AlmostClassicalObservable.from_quadratic(G, 1)
    assert A.value(h) == pytest.approx(expectation(G, h.qm))


def test_position_matrix_two_levels():
    """Test X for N = 2 in the unit oscillator basis"""
    X, _ = position_momentum_matrices(BasisSet.harmonic(2))
    r = 1 / np.sqrt(2)
    np.testing.assert_allclose(X.entries, [[0, r], [r, 0]])


def test_ground_state_moments():
    """Test <X> = 0 and the zero-point energy in the ground state"""
    X, P = position_momentum_matrices(BasisSet.harmonic(6))
    q = encode_state([1, 0, 0, 0, 0, 0])
    energy = HermitianMatrix(0.5 * (X.entries @ X.entries + P.entries @ P.entries))
    assert expectation(X, q) == pytest.approx(0.0, abs=1e-15)
    assert expectation(energy, q) == pytest.approx(0.5)


def test_position_matrices_need_oscillator_basis():
    """Test abstract bases are rejected"""
    with pytest.raises(UnsupportedError):
        position_momentum_matrices(BasisSet.abstract(4))


def test_weyl_symmetrization_is_hermitian():
    """Test XP symmetrization"""
    X, P = position_momentum_matrices(BasisSet.harmonic(5))
    W = weyl_symmetrize("XP", X.entries, P.entries)
    np.testing.assert_allclose(W, W.conj().T, atol=1e-14)
    np.testing.assert_allclose(W, 0.5 * (X.entries @ P.entries + P.entries @ X.entries))


def test_expectation_at_eigenvectors_is_the_eigenvalue():
    """Test <v|G|v> = lambda for every eigenvector of random Hermitian matrices"""
    rng = np.random.default_rng(23)
    for N in (2, 5, 8):
        A = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
        G = HermitianMatrix(0.5 * (A + A.conj().T))
        values, vectors = np.linalg.eigh(G.entries)
        for k in range(N):
            q = encode_state(vectors[:, k])
            assert expectation(G, q) == pytest.approx(values[k], abs=1e-10)
