"""Unit tests for the built-in hybrid models"""

import warnings

import numpy as np
import pytest

from hybridflow.brackets import hybrid_bracket
from hybridflow.dynamics import Method, total_hamiltonian, trajectory
from hybridflow.models import (
    BilinearParams,
    InteractionTerm,
    LocalizedParams,
    LocalizedRangeWarning,
    build_bilinear,
    build_generic,
    build_localized_bilinear,
    check_truncation,
    classical_hamiltonian,
    closed_set_series,
    coherent_state,
    ehrenfest_reference,
    evaluate_localized,
    fit_normal_modes,
    hermite_derivatives,
    hermite_eval,
    interaction_from_recipe,
    normal_mode_frequencies,
    orthonormality_defect,
    position_matrix_element_oracle,
    quantum_hamiltonian,
    truncation_occupation,
)
from hybridflow.observables import (
    ClassicalObservable,
    HermitianMatrix,
    HybridObservable,
    position_momentum_matrices,
)
from hybridflow.phase_space import BasisSet, ClassicalPoint, HybridPoint, encode_state
from hybridflow.utils.errors import UnsupportedError


def ground(N):
    c = np.zeros(N, dtype=complex)
    c[0] = 1.0
    return c


def at(x, p, c):
    return HybridPoint(ClassicalPoint(np.atleast_1d(x), np.atleast_1d(p)), encode_state(c))


def test_hermite_values_at_origin():
    """Test Phi_0(0) = pi^(-1/4) and the odd parity of Phi_1"""
    assert hermite_eval(0, 0.0) == pytest.approx(0.751126, abs=1e-6)
    assert hermite_eval(1, 0.0) == 0.0


def test_hermite_quadrature_orthonormality():
    """Test the quadrature Gram matrix of the first 12 functions"""
    assert orthonormality_defect(12, 32) < 1e-10
    assert orthonormality_defect(6, 26, mass=2.0, frequency=0.7) < 1e-10


def test_hermite_derivatives_match_finite_differences():
    """Test the derivative recurrence"""
    q = np.linspace(-3.0, 3.0, 13)
    h = 1e-6
    _, dphi = hermite_derivatives(6, q)
    plus, _ = hermite_derivatives(6, q + h)
    minus, _ = hermite_derivatives(6, q - h)
    np.testing.assert_allclose(dphi, (plus - minus) / (2 * h), atol=1e-8)


def test_position_matrix_from_quadrature():
    """Test <Phi_i|q|Phi_j> against the ladder construction"""
    assert position_matrix_element_oracle(BasisSet.harmonic(10)) < 1e-12


def test_harmonic_potential_gives_oscillator_spectrum():
    """Test the Galerkin matrix of q^2/2"""
    H = quantum_hamiltonian(BasisSet.harmonic(8), "q**2/2")
    np.testing.assert_allclose(H.entries, np.diag(np.arange(8) + 0.5), atol=1e-10)


def test_free_hybrid():
    """Test v = 0, V = 0, I = 0"""
    basis = BasisSet.harmonic(6)
    T = quantum_hamiltonian(basis, "0")
    _, P = position_momentum_matrices(basis)
    kinetic = 0.5 * (P.entries @ P.entries)
    np.testing.assert_allclose(T.entries[:5, :5], kinetic[:5, :5], atol=1e-10)

    model = build_generic(classical_hamiltonian("0", 1), T, basis=basis)
    c = np.array([0.6, 0, 0.8, 0, 0, 0])
    h = at(0.3, 2.0, c)
    expected = 2.0 + float(np.real(np.vdot(c, T.entries @ c)))
    assert total_hamiltonian(model, h) == pytest.approx(expected)


def test_quantum_hamiltonian_needs_oscillator_basis():
    """Test abstract bases are rejected"""
    with pytest.raises(UnsupportedError):
        quantum_hamiltonian(BasisSet.abstract(4), "q**2")


def test_interaction_recipe_is_weyl_symmetric():
    """Test x * XP becomes x (XP + PX)/2"""
    basis = BasisSet.harmonic(5)
    X, P = position_momentum_matrices(basis)
    coeff = ClassicalObservable.from_expression("x_1", 1)
    I = interaction_from_recipe([InteractionTerm(coeff, "XP")], basis, 1)
    M = I.matrix(np.array([2.0]), np.array([0.0]))
    np.testing.assert_allclose(M, 2.0 * 0.5 * (X.entries @ P.entries + P.entries @ X.entries))
    np.testing.assert_allclose(M, M.conj().T, atol=1e-14)


def test_generic_model_accepts_explicit_interaction():
    """Test build_generic with a ready-made hybrid interaction"""
    I = HybridObservable.coupling(
        ClassicalObservable.from_expression("x_1", 1), HermitianMatrix.diagonal([1, -1])
    )
    model = build_generic(classical_hamiltonian("x_1**2/2", 1), HermitianMatrix.zeros(2), I)
    assert total_hamiltonian(model, at(2.0, 0.0, [1, 0])) == pytest.approx(4.0)


def test_uncoupled_bilinear_sectors_are_independent():
    """Test lam = 0 gives no quantum part in cross-sector brackets"""
    model = build_bilinear(BilinearParams(lam=(0.0,), N=6))
    f = HybridObservable.from_classical(ClassicalObservable.from_expression("x_1*p_1", 1), 6)
    c = coherent_state(0.4 + 0.2j, 6)
    result = hybrid_bracket(f, model.hamiltonian, at(0.5, -0.2, c))
    assert result.quantum_part == 0.0


def test_bilinear_parameter_validation():
    """Test bilinear parameter checks"""
    with pytest.raises(ValueError):
        BilinearParams(N=1)
    with pytest.raises(ValueError):
        BilinearParams(m=(1.0, 1.0), omega=(1.0,), lam=(0.1,))
    with pytest.raises(ValueError):
        BilinearParams(omega=(-1.0,))


def test_normal_mode_frequencies():
    """Test sqrt(1 + lam) and sqrt(1 - lam) for unit parameters"""
    freqs = normal_mode_frequencies(BilinearParams(lam=(0.5,)))
    np.testing.assert_allclose(freqs, [np.sqrt(1.5), np.sqrt(0.5)], atol=1e-12)


def test_fit_recovers_normal_modes():
    """Test frequency fitting on the exact closed-system solution"""
    params = BilinearParams(lam=(0.3,))
    times = np.arange(2001) * 0.01
    series = ehrenfest_reference(params, [1.0, 0.0, 0.0, 0.0], times)
    fitted = fit_normal_modes(series, 0.01)
    np.testing.assert_allclose(fitted, normal_mode_frequencies(params), atol=1e-6)


def test_bilinear_energy_with_fourth_order_steps():
    """Test energy conservation of the coupled model"""
    model = build_bilinear(BilinearParams(lam=(0.1,), N=8))
    traj = trajectory(model, at(1.0, 0.0, ground(8)), 2.0, 1e-3, method=Method.MIDPOINT4)
    assert traj.max_energy_drift() < 1e-10
    assert traj.max_constraint_drift() < 1e-10


def test_first_moments_follow_closed_system():
    """Test (x, p, <X>, <P>) against the exact linear system"""
    params = BilinearParams(lam=(0.5,), N=16)
    model = build_bilinear(params)
    traj = trajectory(model, at(1.0, 0.0, ground(16)), 5.0, 2e-3, method=Method.MIDPOINT4)
    series = closed_set_series(traj, model.basis)
    reference = ehrenfest_reference(params, series[0], traj.times)
    assert np.max(np.abs(series - reference)) < 1e-8
    assert max(truncation_occupation(h.qm.z, 14) for h in traj.states) < 1e-10


def test_coherent_state():
    """Test normalization and the vacuum limit of coherent states"""
    np.testing.assert_array_equal(coherent_state(0, 4), ground(4))
    c = coherent_state(1.0 + 0.5j, 20)
    assert np.linalg.norm(c) == pytest.approx(1.0)
    assert truncation_occupation(c, 18) < 1e-10


def test_truncation_check_reports_occupation():
    """Test the occupation of the top truncation levels"""
    assert check_truncation(ground(8)) == 0.0
    assert check_truncation(coherent_state(1.5, 6)) > 1e-10


def test_localized_interaction_values():
    """Test vanishing at x = 0 and |Phi_0(1)|^2 at x = 1"""
    params = LocalizedParams(lam=(1.0,), N=8)
    model = build_localized_bilinear(params)
    assert evaluate_localized(params, model, at(0.0, 0.0, ground(8))).value == 0.0
    result = evaluate_localized(params, model, at(1.0, 0.0, ground(8)))
    assert result.value == pytest.approx(np.exp(-1.0) / np.sqrt(np.pi), rel=1e-12)
    assert result.warning is None


def test_localized_interaction_decays_far_away():
    """Test the interaction at |x| = 8, outside the validated range"""
    params = LocalizedParams(lam=(1.0,), N=8)
    model = build_localized_bilinear(params)
    with pytest.warns(LocalizedRangeWarning):
        result = evaluate_localized(params, model, at(8.0, 0.0, ground(8)))
    assert result.value <= 1e-12
    assert result.warning is not None


def test_localized_range_warning_is_not_latched():
    """Test that every out-of-range evaluation warns, with no state kept in the model"""
    model = build_localized_bilinear(LocalizedParams(lam=(1.0,), N=8))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        for _ in range(3):
            model.I.value(at(8.0, 0.0, ground(8)))
        model.I.value(at(0.5, 0.0, ground(8)))
    assert [w.category for w in caught] == [LocalizedRangeWarning] * 3


def test_localized_derivatives_match_finite_differences():
    """Test the analytic dM/dx of the localized interaction"""
    params = LocalizedParams(lam=(0.4,), N=6)
    model = build_localized_bilinear(params)
    numeric = HybridObservable(n=1, N=6, matrix_fn=model.I.matrix_fn)
    h = at(0.8, 0.1, coherent_state(0.3, 6))
    np.testing.assert_allclose(model.I.gradient(h).x, numeric.gradient(h).x, atol=1e-8)


def test_localized_quadrature_must_cover_basis():
    """Test rejection of a quadrature with fewer nodes than basis functions"""
    with pytest.raises(ValueError):
        LocalizedParams(N=12, nodes=8)
    assert LocalizedParams(N=12).nodes == 32


def test_localized_energy_conservation():
    """Test energy drift of the localized model"""
    model = build_localized_bilinear(LocalizedParams(lam=(0.1,), N=8))
    traj = trajectory(model, at(0.5, 0.0, ground(8)), 2.0, 1e-2, method=Method.MIDPOINT4)
    assert traj.max_energy_drift() < 1e-6
    assert traj.max_constraint_drift() < 1e-10


@pytest.mark.slow
def test_bilinear_energy_over_ten_thousand_steps():
    """Test energy conservation of the coupled model over 1e4 fourth-order steps"""
    model = build_bilinear(BilinearParams(lam=(0.1,), N=8))
    traj = trajectory(model, at(1.0, 0.0, ground(8)), 10.0, 1e-3, method=Method.MIDPOINT4)
    assert traj.metadata["steps"] == 10_000
    assert traj.max_energy_drift() <= 1e-10


@pytest.mark.slow
def test_localized_energy_at_fine_steps():
    """Test energy drift of the localized model at dt = 1e-3 up to t = 10"""
    model = build_localized_bilinear(LocalizedParams(lam=(0.1,), N=8))
    traj = trajectory(model, at(1.0, 0.0, ground(8)), 10.0, 1e-3, method=Method.MIDPOINT4)
    assert traj.max_energy_drift() <= 1e-6
    assert traj.max_constraint_drift() <= 1e-10


@pytest.mark.slow
def test_first_moments_and_frequencies_at_small_coupling():
    """Test the closed moment system and sqrt(1 +- lam) at lam = 0.1 over t = 20"""
    params = BilinearParams(lam=(0.1,), N=24)
    model = build_bilinear(params)
    traj = trajectory(model, at(1.0, 0.0, ground(24)), 20.0, 2e-3, method=Method.MIDPOINT4)
    series = closed_set_series(traj, model.basis)
    reference = ehrenfest_reference(params, series[0], traj.times)
    assert np.max(np.abs(series - reference)) <= 1e-8
    assert max(truncation_occupation(h.qm.z, 22) for h in traj.states) <= 1e-10
    fitted = fit_normal_modes(series, traj.metadata["dt"])
    np.testing.assert_allclose(fitted, normal_mode_frequencies(params), atol=1e-6)
