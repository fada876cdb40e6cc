"""Unit tests for hybrid densities, sampling and Liouville propagation"""

import dataclasses
import pickle

import numpy as np
import pytest

from hybridflow.dynamics import ModelSpec, unitary_oracle
from hybridflow.ensemble import (
    DensityComponent,
    DensitySpec,
    FactorComponent,
    GaussianProposal,
    MatrixDensity,
    SamplerSpec,
    SeparableRecipe,
    SeparableTerm,
    check_normalization,
    density_value,
    draw_samples,
    liouville_propagate,
    normalization,
    normalization_tolerance,
    positivity_normalization_report,
    separable_density,
    separable_density_direct,
)
from hybridflow.models import BilinearParams, build_bilinear
from hybridflow.observables import (
    ClassicalObservable,
    HermitianMatrix,
    HybridObservable,
    expectation,
    position_momentum_matrices,
)
from hybridflow.phase_space import ClassicalPoint, HybridPoint, encode_state, random_state
from hybridflow.utils.errors import (
    DimensionMismatchError,
    IntegrityError,
    NormalizationError,
    SamplerError,
    StepFailureError,
)

GAUSSIAN = "exp(-(x_1**2 + p_1**2))/pi"


def weight(expr, n=1):
    return ClassicalObservable.from_expression(expr, n)


def at(x, p, c):
    return HybridPoint(ClassicalPoint([x], [p]), encode_state(c))


@pytest.fixture
def gaussian_ground():
    return DensitySpec.single(weight(GAUSSIAN), [1, 0, 0, 0])


@pytest.fixture
def sampler():
    return SamplerSpec(samples=24, seed=42, proposal=GaussianProposal.isotropic(1, 1.0))


@pytest.fixture
def bilinear():
    return build_bilinear(BilinearParams(lam=(0.1,), N=4))


def test_density_value_examples():
    """Test perfect overlap, orthogonality and a two-component mixture"""
    one = weight("1")
    h = at(0.0, 0.0, [1, 0])
    assert density_value(DensitySpec.single(one, [1, 0]), h) == pytest.approx(1.0)
    assert density_value(DensitySpec.single(one, [0, 1]), h) == 0.0
    mixed = DensitySpec(
        (DensityComponent(weight("0.3"), [1, 0]), DensityComponent(weight("0.7"), [0, 1]))
    )
    assert density_value(mixed, h) == pytest.approx(0.3)


def test_mixture_of_densities():
    """Test p * first + (1 - p) * second"""
    first = DensitySpec.single(weight("1"), [1, 0])
    second = DensitySpec.single(weight("1"), [0, 1])
    mix = DensitySpec.mixture(0.25, first, second)
    assert density_value(mix, at(0.0, 0.0, [0, 1])) == pytest.approx(0.75)
    with pytest.raises(ValueError):
        DensitySpec.mixture(1.5, first, second)


def test_negative_weight_is_an_integrity_error():
    """Test detection of a negative weight function value"""
    dens = DensitySpec.single(weight("x_1"), [1, 0])
    with pytest.raises(IntegrityError):
        density_value(dens, at(-1.0, 0.0, [1, 0]))


def test_gaussian_weight_is_normalized(gaussian_ground):
    """Test the phase-space quadrature of the weight"""
    assert normalization(gaussian_ground) == pytest.approx(1.0, abs=1e-8)
    assert check_normalization(gaussian_ground) < 1e-6


def test_unnormalized_density_is_rejected():
    """Test the normalization check"""
    dens = DensitySpec.single(weight("2*" + GAUSSIAN), [1, 0])
    with pytest.raises(IntegrityError):
        check_normalization(dens)


def test_pure_product_state_density():
    """Test a single separable term of pure product states"""
    recipe = SeparableRecipe(
        2,
        2,
        (
            SeparableTerm(
                weight("1"), (FactorComponent(1.0, (1, 0)),), (FactorComponent(1.0, (0, 1)),)
            ),
        ),
    )
    dens = separable_density(recipe)
    assert len(dens.components) == 1
    h = at(0.0, 0.0, [0, 1, 0, 0])
    assert density_value(dens, h) == pytest.approx(1.0)
    assert separable_density_direct(recipe, h) == pytest.approx(1.0)


def test_totally_mixed_two_qubit_density():
    """Test uniform weights 1/4 over a product basis"""
    basis = (FactorComponent(0.5, (1, 0)), FactorComponent(0.5, (0, 1)))
    recipe = SeparableRecipe(2, 2, (SeparableTerm(weight("1"), basis, basis),), N=4)
    dens = separable_density(recipe)
    assert len(dens.components) == 4
    rng = np.random.default_rng(1)
    for _ in range(5):
        h = HybridPoint(ClassicalPoint([0.2], [0.1]), random_state(4, rng))
        assert density_value(dens, h) == pytest.approx(0.25)
        assert separable_density_direct(recipe, h) == pytest.approx(0.25)


def test_separable_factors_must_be_orthonormal():
    """Test rejection of non-orthogonal factor states"""
    r = 1 / np.sqrt(2)
    factor = (FactorComponent(0.5, (1, 0)), FactorComponent(0.5, (r, r)))
    with pytest.raises(IntegrityError):
        separable_density(SeparableRecipe(2, 2, (SeparableTerm(weight("1"), factor, factor),)))


def test_matrix_density():
    """Test a general matrix-valued density"""
    dens = MatrixDensity(1, 2, lambda x, p: np.diag([x[0] ** 2, 1.0]))
    assert dens.value(at(2.0, 0.0, [1, 0])) == pytest.approx(4.0)


def test_sampling_is_reproducible(gaussian_ground, sampler):
    """Test seeded sampling and normalized weights"""
    first = draw_samples(gaussian_ground, sampler)
    second = draw_samples(gaussian_ground, sampler)
    assert [s.point.to_vector().tolist() for s in first] == [
        s.point.to_vector().tolist() for s in second
    ]
    assert sum(s.weight for s in first) == pytest.approx(1.0, abs=1e-12)
    assert all(s.component == 0 for s in first)


def test_sampler_picks_components_by_weight():
    """Test component selection proportional to the weights"""
    dens = DensitySpec(
        (
            DensityComponent(weight("0.2*" + GAUSSIAN), [1, 0]),
            DensityComponent(weight("0.8*" + GAUSSIAN), [0, 1]),
        )
    )
    spec = SamplerSpec(2000, 7, GaussianProposal.isotropic(1))
    share = np.mean([s.component == 1 for s in draw_samples(dens, spec)])
    assert share == pytest.approx(0.8, abs=0.05)


def test_degenerate_proposal_is_a_sampler_error():
    """Test that a vanishing density yields no usable samples"""
    dens = DensitySpec.single(weight("0"), [1, 0])
    with pytest.raises(SamplerError):
        draw_samples(dens, SamplerSpec(10, 0, GaussianProposal.isotropic(1)))


def test_density_is_constant_along_characteristics(bilinear, gaussian_ground, sampler):
    """Test Liouville transport of the density"""
    run = liouville_propagate(bilinear, gaussian_ground, sampler, 1.0, 0.05)
    assert run.density_series.shape == (24, 21)
    assert run.max_density_deviation() < 1e-8
    report = positivity_normalization_report(run)
    assert report.passed
    assert report.offending_index is None


def test_empty_observable_list_reports_monitors_only(bilinear, gaussian_ground, sampler):
    """Test a run without observables"""
    run = liouville_propagate(bilinear, gaussian_ground, sampler, 0.2, 0.05)
    report = positivity_normalization_report(run)
    assert report.observables == []
    assert list(run.to_dataframe().columns) == ["t"]
    assert "max_density_deviation" in report.to_dict()


def test_corrupted_weight_fails_with_index(bilinear, gaussian_ground, sampler):
    """Test the positivity detector on a negated weight"""
    run = liouville_propagate(bilinear, gaussian_ground, sampler, 0.2, 0.05)
    weights = run.weights.copy()
    weights[3] = -weights[3]
    report = positivity_normalization_report(dataclasses.replace(run, weights=weights))
    assert not report.passed
    assert report.offending_index == 3


def test_uncoupled_sectors_match_single_sector_runs(gaussian_ground, sampler):
    """Test ensemble averages of an I = 0 product density"""
    model = build_bilinear(BilinearParams(lam=(0.0,), N=4))
    H_qm = model.H_qm
    G = HermitianMatrix(np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 2]]))
    observables = [
        HybridObservable.from_classical(weight("x_1"), 4),
        HybridObservable.from_quadratic(G, 1, name="G"),
    ]
    superposed = DensitySpec.single(weight(GAUSSIAN), [0.6, 0.8, 0, 0])
    run = liouville_propagate(model, superposed, sampler, 1.0, 0.01, observables, "midpoint4")

    x0 = np.array([s.point.cl.x[0] for s in run.samples])
    p0 = np.array([s.point.cl.p[0] for s in run.samples])
    t = run.times
    classical = run.weights @ (np.outer(x0, np.cos(t)) + np.outer(p0, np.sin(t)))
    np.testing.assert_allclose(run.means[0], classical, atol=1e-6)

    q0 = encode_state([0.6, 0.8, 0, 0])
    quantum = [expectation(G, unitary_oracle(H_qm, q0, tk)) for tk in t]
    np.testing.assert_allclose(run.means[1], quantum, atol=1e-6)


def test_uncoupled_sectors_factorize():
    """Test that classical and quantum marginals stay independent without coupling"""
    model = build_bilinear(BilinearParams(lam=(0.0,), N=2))
    r = 1 / np.sqrt(2)
    dens = DensitySpec(
        (
            DensityComponent(weight("0.5*" + GAUSSIAN), [r, r]),
            DensityComponent(weight("0.5*" + GAUSSIAN), [r, -r]),
        )
    )
    spec = SamplerSpec(1000, 11, GaussianProposal.isotropic(1))
    run = liouville_propagate(model, dens, spec, 0.3, 0.1)

    X, _ = position_momentum_matrices(model.basis)
    x = np.array([traj.final.cl.x[0] for traj in run.trajectories])
    a = np.array([expectation(X, traj.final.qm) for traj in run.trajectories])
    w = run.weights
    product = (x - w @ x) * (a - w @ a)
    covariance = w @ product
    sigma = np.sqrt((w**2) @ (product - covariance) ** 2)
    assert abs(covariance) <= 3 * sigma


def test_worker_processes_give_identical_results(bilinear, gaussian_ground, sampler):
    """Test that characteristics run in joblib workers match the serial run"""
    serial = liouville_propagate(bilinear, gaussian_ground, sampler, 0.2, 0.05)
    parallel = liouville_propagate(bilinear, gaussian_ground, sampler, 0.2, 0.05, workers=3)
    np.testing.assert_array_equal(serial.density_series, parallel.density_series)
    for a, b in zip(serial.trajectories, parallel.trajectories):
        np.testing.assert_array_equal(a.coordinates(), b.coordinates())


@pytest.mark.parametrize(
    "error",
    [
        StepFailureError(2.5e-3, 40, step_index=7),
        DimensionMismatchError("density projector state", 3, 4),
        NormalizationError(1.25, 1e-9),
    ],
)
def test_errors_survive_worker_transport(error):
    """Test that errors raised in a worker arrive with their fields intact"""
    restored = pickle.loads(pickle.dumps(error))
    assert type(restored) is type(error)
    assert str(restored) == str(error)
    assert vars(restored) == vars(error)


def test_dimension_mismatch_between_model_and_density(sampler):
    """Test density/model dimension checks"""
    model = ModelSpec(
        H_cl=weight("p_1**2/2"),
        H_qm=HermitianMatrix.zeros(2),
        I=HybridObservable.zero(1, 2),
    )
    dens = DensitySpec.single(weight(GAUSSIAN), [1, 0, 0])
    with pytest.raises(ValueError):
        liouville_propagate(model, dens, sampler, 0.1, 0.05)


GAUSSIAN_3D = "exp(-(x_1**2 + x_2**2 + x_3**2 + p_1**2 + p_2**2 + p_3**2)/2)/(8*pi**3)"


def test_normalization_in_six_phase_space_dimensions():
    """Test the normalization estimate for three classical coordinates"""
    matched = DensitySpec.single(weight(GAUSSIAN_3D, 3), [1, 0])
    assert normalization(matched) == pytest.approx(1.0, abs=1e-10)
    assert check_normalization(matched) <= normalization_tolerance(3)
    narrow = "exp(-(x_1**2 + x_2**2 + x_3**2 + p_1**2 + p_2**2 + p_3**2))/pi**3"
    assert normalization(DensitySpec.single(weight(narrow, 3), [1, 0])) == pytest.approx(
        1.0, abs=1e-2
    )
    with pytest.raises(IntegrityError):
        check_normalization(DensitySpec.single(weight("2*" + GAUSSIAN_3D, 3), [1, 0]))


def test_ensemble_with_three_classical_coordinates():
    """Test sampling and propagation for n = 3"""
    model = build_bilinear(BilinearParams(m=(1.0,) * 3, omega=(1.0,) * 3, lam=(0.1,) * 3, N=2))
    dens = DensitySpec.single(weight(GAUSSIAN_3D, 3), [1, 0])
    spec = SamplerSpec(12, 5, GaussianProposal.isotropic(3))
    run = liouville_propagate(model, dens, spec, 0.2, 0.05)
    assert run.density_series.shape == (12, 5)
    assert run.max_density_deviation() < 1e-8
    assert positivity_normalization_report(run).passed


def test_separable_recipe_derives_and_checks_dimensions():
    """Test N = N_A * N_B and factor lengths without an explicit N"""
    qubit = (FactorComponent(1.0, (1, 0)),)
    qutrit = (FactorComponent(1.0, (0, 1, 0)),)
    term = SeparableTerm(weight("1"), qubit, qutrit)
    assert SeparableRecipe(2, 3, (term,)).N == 6
    with pytest.raises(DimensionMismatchError):
        SeparableRecipe(2, 2, (term,))
    with pytest.raises(DimensionMismatchError):
        SeparableRecipe(2, 3, (term,), N=5)
