from fractions import Fraction

import numpy as np
import pytest
from scipy.linalg import eigvalsh
from scipy.optimize import brentq

from classes.hamiltonian import ModelParams, TridiagonalHamiltonian, build_laguerre_hamiltonian
from classes.physical import DysonMap
from closed_forms import assemble_metric, p0, p1
from definitions.errors import DimensionError, DomainError
from definitions.global_constants import DEFAULT_ALPHA_CAP
from definitions.states import DysonVariant, Positivity
from metric_analysis import (check_positive_definite, classify, dyson_first_order, dyson_sqrt, evolve,
                             find_alpha_boundary, hidden_conjugate, norm_trajectory, off_tridiagonal_mass,
                             position_operator, similarity_transform, spectral_decompose, spectral_metric,
                             theta_norm)
from spectrum import compute_spectrum, spectral_data


def metric(N, a, alphas):
    return assemble_metric(ModelParams(N, a), len(alphas), alphas).theta


def relative_frobenius(left, right):
    return np.linalg.norm(left - right) / np.linalg.norm(right)


def test_diagonal_metric_is_positive_definite():
    verdict = check_positive_definite(metric(5, 1, []))
    assert verdict.positivity == Positivity.POSITIVE_DEFINITE
    assert verdict.pivot is None
    factor = verdict.witness
    np.testing.assert_allclose(factor @ factor.T, metric(5, 1, []).to_dense(), atol=1e-14)


def test_zero_coupling_reduces_to_diagonal_metric():
    assert check_positive_definite(metric(4, 1, [Fraction(0)])).positivity.is_positive_definite()


def test_large_coupling_is_indefinite_with_exact_witness():
    theta = metric(4, 1, [Fraction(10)])
    verdict = check_positive_definite(theta)
    assert verdict.positivity.is_indefinite()
    assert verdict.pivot == 1
    v = verdict.witness
    assert v.dot(theta.to_dense(object).dot(v)) <= 0


def test_float_witness():
    theta = metric(6, 2.0, [-3.0, 1.0])
    verdict = check_positive_definite(theta)
    if verdict.positivity.is_indefinite():
        assert verdict.witness @ theta.to_dense() @ verdict.witness <= 1e-12
    assert verdict.positivity.is_positive_definite() == (eigvalsh(theta.to_dense())[0] > 0)


def test_classify_sets_the_status():
    family = classify(assemble_metric(ModelParams(4, 1), 1, [Fraction(10)]))
    assert family.positivity == Positivity.INDEFINITE
    assert family.witness is not None


def test_boundary_along_a_ray():
    params = ModelParams(4, 1)
    alpha_max, capped = find_alpha_boundary(params, 1, [1.0])
    assert not capped
    assert 0 < alpha_max < 10

    def smallest_eigenvalue(alpha):
        return eigvalsh(p0(params).matrix.to_dense() + alpha * p1(params).matrix.to_dense())[0]

    assert smallest_eigenvalue(alpha_max * (1 - 1e-6)) > 0
    assert smallest_eigenvalue(alpha_max * (1 + 1e-6)) < 0
    assert alpha_max == pytest.approx(brentq(smallest_eigenvalue, 1e-6, 10.0, xtol=1e-14), rel=1e-8)


def test_boundary_is_finite_for_several_couplings():
    for a in (1, 2, 3):
        for sign in (1.0, -1.0):
            alpha_max, capped = find_alpha_boundary(ModelParams(5, a), 1, [sign])
            assert not capped
            assert 0 < alpha_max < DEFAULT_ALPHA_CAP


def test_diagonal_metric_never_loses_positivity():
    alpha_max, capped = find_alpha_boundary(ModelParams(4, 1), 0, [-1.0])
    assert capped
    assert alpha_max == DEFAULT_ALPHA_CAP


def test_boundary_in_two_coefficients():
    params = ModelParams(5, 2)
    alpha_max, capped = find_alpha_boundary(params, 2, [3.0, 4.0])
    assert not capped
    theta = metric(5, 2.0, [0.6 * alpha_max * 0.999, 0.8 * alpha_max * 0.999])
    assert check_positive_definite(theta).positivity.is_positive_definite()
    with pytest.raises(DomainError):
        find_alpha_boundary(params, 2, [0.0, 0.0])
    with pytest.raises(DimensionError):
        find_alpha_boundary(params, 2, [1.0])


def test_square_root_of_identity():
    omega = dyson_sqrt(np.eye(4)).omega
    np.testing.assert_allclose(omega, np.eye(4), atol=1e-15)


def test_square_root_of_diagonal_metric():
    theta = metric(5, 2, [])
    dyson = dyson_sqrt(theta)
    assert dyson.variant == DysonVariant.SYMMETRIC_SQRT
    np.testing.assert_allclose(dyson.omega, np.diag(np.sqrt(np.diag(theta.to_dense()))), atol=1e-14)


@pytest.mark.parametrize("N", [3, 6, 9, 12])
def test_square_root_reconstruction(N):
    rng = np.random.default_rng(N)
    spectral = spectral_data(ModelParams(N, 1.5), unit_norm=True)
    theta = spectral_metric(spectral, rng.uniform(0.5, 2.0, N))
    omega = dyson_sqrt(theta).omega
    np.testing.assert_allclose(omega, omega.T)
    assert relative_frobenius(omega @ omega, theta) <= 1e-12


def test_square_root_needs_positivity():
    with pytest.raises(DomainError):
        dyson_sqrt(metric(4, 1, [Fraction(10)]))


def test_first_order_map():
    params = ModelParams(5, 2.0)
    D = np.sqrt(p0(params).matrix.to_dense())
    np.testing.assert_array_equal(dyson_first_order(params, 0.0).omega, D)
    omega = dyson_first_order(params, 0.3).omega
    assert omega[0, 1] == pytest.approx(0.15)
    assert dyson_first_order(params, 0.3).variant == DysonVariant.FIRST_ORDER


def test_first_order_map_error_is_quadratic():
    params = ModelParams(6, 2.0)

    def error(alpha):
        theta = p0(params).matrix.to_dense() + alpha * p1(params).matrix.to_dense()
        return np.linalg.norm(dyson_first_order(params, alpha).metric() - theta)

    ratio = error(0.1) / error(0.05)
    assert ratio >= 3.5
    assert ratio == pytest.approx(4.0, rel=1e-6)


def test_hidden_conjugate_of_laguerre_hamiltonian():
    params = ModelParams(6, 2.0)
    H = build_laguerre_hamiltonian(params)
    theta = metric(6, 2.0, [0.01, 0.001])
    conjugate = hidden_conjugate(H, theta)
    assert np.max(np.abs(conjugate - H.to_dense())) <= 1e-10 * H.max_abs()


def test_hidden_conjugate_of_symmetric_hamiltonian():
    H = TridiagonalHamiltonian([1.0, 2.0, 3.0], [0.5, 0.5], [0.5, 0.5])
    np.testing.assert_allclose(hidden_conjugate(H, np.eye(3)), H.to_dense())
    with pytest.raises(DomainError):
        hidden_conjugate(H, np.zeros((3, 3)))


def test_similarity_transform_is_symmetric():
    params = ModelParams(6, 2.0)
    H = build_laguerre_hamiltonian(params)
    h = similarity_transform(H, dyson_sqrt(metric(6, 2.0, [0.01])))
    assert np.max(np.abs(h - h.T)) <= 1e-10 * np.max(np.abs(h))
    np.testing.assert_allclose(eigvalsh(0.5 * (h + h.T)), compute_spectrum(params), rtol=1e-10)


def test_single_site_weight():
    kappa2 = spectral_decompose(metric(1, 1, []), spectral_data(ModelParams(1, 1.0)))
    np.testing.assert_allclose(kappa2, [1.0])


def test_spectral_reconstruction():
    spectral = spectral_data(ModelParams(6, 2.0), unit_norm=True)
    theta = metric(6, 2, [Fraction(1, 10), Fraction(1, 10)])
    kappa2 = spectral_decompose(theta, spectral)
    assert relative_frobenius(spectral_metric(spectral, kappa2), theta.to_dense()) <= 1e-10


def test_non_metric_is_rejected():
    spectral = spectral_data(ModelParams(4, 1.0))
    with pytest.raises(DomainError):
        spectral_decompose(np.diag([1.0, 2.0, 3.0, 4.0]), spectral)


@pytest.mark.parametrize("alphas", [
    [0.0], [0.1], [-0.1], [5.0], [-5.0],
    [0.05, 0.05], [-0.05, 0.02], [3.0, 3.0], [0.0, -4.0],
])
def test_positive_weights_match_positivity(alphas):
    spectral = spectral_data(ModelParams(5, 2.0), unit_norm=True)
    theta = metric(5, 2.0, alphas)
    kappa2 = spectral_decompose(theta, spectral)
    assert np.all(kappa2 > 0) == check_positive_definite(theta).positivity.is_positive_definite()


def test_position_operator_without_smearing():
    model = position_operator(DysonMap(np.eye(4), DysonVariant.SYMMETRIC_SQRT))
    np.testing.assert_array_equal(model.Q, np.diag([1.0, 2.0, 3.0, 4.0]))
    np.testing.assert_array_equal(model.chi, np.eye(4))
    assert model.tridiagonal_defect == 0


def test_position_operator_spectrum_and_self_adjointness():
    theta = metric(6, 2.0, [0.01, 0.001])
    sites = [0.0, 0.5, 2.0, 3.0, 4.5, 7.0]
    model = position_operator(dyson_sqrt(theta), sites)
    np.testing.assert_allclose(np.sort(np.linalg.eigvals(model.Q).real), sites, atol=1e-10)
    dense = theta.to_dense()
    np.testing.assert_allclose(dense @ model.Q, model.Q.T @ dense, atol=1e-12)
    for s in range(6):
        np.testing.assert_allclose(model.Q @ model.chi[:, s], sites[s] * model.chi[:, s], atol=1e-10)


def test_position_operator_validates_sites():
    dyson = DysonMap(np.eye(3), DysonVariant.SYMMETRIC_SQRT)
    with pytest.raises(DomainError):
        position_operator(dyson, [1.0, 1.0, 2.0])
    with pytest.raises(DimensionError):
        position_operator(dyson, [1.0, 2.0])
    with pytest.raises(DomainError):
        position_operator(DysonMap(np.zeros((3, 3)), DysonVariant.FIRST_ORDER))


def test_first_order_position_is_nearly_tridiagonal():
    params = ModelParams(4, 2.0)
    coarse = position_operator(dyson_first_order(params, 0.02)).tridiagonal_defect
    fine = position_operator(dyson_first_order(params, 0.01)).tridiagonal_defect
    assert coarse > 0
    assert coarse / fine > 3


def test_off_tridiagonal_mass():
    matrix = np.arange(16.0).reshape(4, 4)
    assert off_tridiagonal_mass(matrix) == pytest.approx(np.sqrt(2**2 + 3**2 + 7**2 + 8**2 + 12**2 + 13**2))


def test_theta_norm():
    assert theta_norm(np.diag([1.0, 2.0]), [1j, 1.0]) == pytest.approx(3.0)


@pytest.fixture
def trajectory():
    params = ModelParams(6, 2.0)
    theta = metric(6, 2.0, [0.05])
    initial = np.zeros(6)
    initial[0] = 1.0
    times = np.linspace(0.0, 10.0, 101)
    return params, theta, initial, evolve(params, theta, initial, times)


def test_evolution_starts_at_the_initial_state(trajectory):
    _, _, initial, result = trajectory
    np.testing.assert_allclose(result.wavefunctions[0], initial, atol=1e-10)


def test_evolution_conserves_the_metric_norm(trajectory):
    _, theta, _, result = trajectory
    norms = norm_trajectory(theta, result)
    np.testing.assert_allclose(norms, norms[0], rtol=1e-10)


def test_site_probabilities_are_normalized(trajectory):
    _, theta, _, result = trajectory
    assert result.site_probabilities.shape == (101, 6)
    assert np.all(result.site_probabilities >= 0)
    np.testing.assert_allclose(result.site_probabilities.sum(axis=1), 1.0, atol=1e-12)
    np.testing.assert_allclose(result.smeared, result.wavefunctions @ theta.to_dense(), atol=1e-12)


def test_stationary_state():
    params = ModelParams(5, 1.0)
    theta = metric(5, 1.0, [0.02])
    ground = spectral_data(params).right_vectors[:, 0]
    result = evolve(params, theta, ground, np.linspace(0.0, 5.0, 21))
    np.testing.assert_allclose(result.site_probabilities, np.tile(result.site_probabilities[0], (21, 1)), atol=1e-10)


def test_diagonal_metric_probabilities():
    params = ModelParams(5, 1.0)
    theta = metric(5, 1, [])
    initial = np.array([1.0, -0.5, 0.25, 0.0, 2.0])
    result = evolve(params, theta, initial, np.linspace(0.0, 3.0, 7))
    D = np.sqrt(np.diag(theta.to_dense()))
    expected = np.abs(result.wavefunctions * D) ** 2
    expected /= expected.sum(axis=1, keepdims=True)
    np.testing.assert_allclose(result.site_probabilities, expected, atol=1e-12)


def test_evolution_preconditions():
    params = ModelParams(4, 1)
    with pytest.raises(DomainError):
        evolve(params, metric(4, 1, [Fraction(10)]), [1.0, 0.0, 0.0, 0.0], [0.0, 1.0])
    with pytest.raises(DomainError):
        evolve(params, metric(4, 1, []), [0.0, 0.0, 0.0, 0.0], [0.0, 1.0])
    with pytest.raises(DimensionError):
        evolve(params, metric(4, 1, []), [1.0, 0.0], [0.0, 1.0])


@pytest.mark.parametrize("N", [2, 5, 9, 12])
def test_diagonal_metric_is_positive_for_sampled_couplings(N):
    rng = np.random.default_rng(100 + N)
    for a in 100.0 * (1.0 - rng.random(20)):
        assert check_positive_definite(metric(N, Fraction(float(a)), [])).positivity.is_positive_definite()


@pytest.mark.parametrize("N", range(4, 9))
def test_boundary_straddles_the_eigenvalue_crossing(N):
    params = ModelParams(N, 1)
    alpha_max, capped = find_alpha_boundary(params, 1, [1.0])
    assert not capped

    def smallest_eigenvalue(alpha):
        return eigvalsh(p0(params).matrix.to_dense() + alpha * p1(params).matrix.to_dense())[0]

    assert smallest_eigenvalue(alpha_max * (1 - 1e-6)) > 0
    assert smallest_eigenvalue(alpha_max * (1 + 1e-6)) < 0


def test_boundary_uses_the_given_pseudometrics():
    params = ModelParams(5, 2)
    default, _ = find_alpha_boundary(params, 1, [1.0])
    P0, P1 = p0(params).matrix, p1(params).matrix
    doubled, capped = find_alpha_boundary(params, 1, [1.0], pseudometrics=[P0, P1.scale(2)])
    assert not capped
    assert doubled == pytest.approx(default / 2, rel=1e-9)
    same, _ = find_alpha_boundary(params, 1, [1.0], pseudometrics=[P0.to_dense(), P1.to_dense()])
    assert same == pytest.approx(default, rel=1e-12)
    with pytest.raises(DimensionError):
        find_alpha_boundary(params, 1, [1.0], pseudometrics=[P0])


def test_spectral_weights_round_trip_for_random_members():
    rng = np.random.default_rng(2024)
    for _ in range(20):
        N = int(rng.integers(4, 9))
        k = int(rng.integers(1, 4))
        a = float(rng.choice([1.0, 1.5, 2.0, 2.5, 3.0]))
        alphas = list(rng.uniform(-0.2, 0.2, k))
        theta = metric(N, a, alphas)
        spectral = spectral_data(ModelParams(N, a), unit_norm=True)
        kappa2 = spectral_decompose(theta, spectral)
        assert relative_frobenius(spectral_metric(spectral, kappa2), theta.to_dense()) <= 1e-9


def test_singular_dyson_map_is_rejected():
    H = TridiagonalHamiltonian([1.0, 2.0, 3.0], [0.5, -1.0], [2.0, 0.25])
    singular = DysonMap(np.diag([1.0, 0.0, 2.0]), DysonVariant.FIRST_ORDER)
    with pytest.raises(DomainError):
        position_operator(singular)
    with pytest.raises(DomainError):
        similarity_transform(H, singular)
    with pytest.raises(DomainError):
        hidden_conjugate(H, np.diag([1.0, 0.0, 1.0]))
