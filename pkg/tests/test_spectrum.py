from fractions import Fraction

import numpy as np
import pytest

from classes.hamiltonian import ModelParams, build_laguerre_hamiltonian
from definitions.errors import DomainError
from definitions.reference_values import REFERENCE_SPECTRA
from spectrum import (biorthogonal_overlaps, compute_spectrum, dense_spectrum, laguerre_eval,
                      laguerre_zeros_bisection, left_eigenvectors, right_eigenvector, spectral_data,
                      spectrum_table, symmetrized_jacobi)


@pytest.mark.parametrize("N, a", sorted(REFERENCE_SPECTRA))
def test_reference_spectra(N, a):
    energies = compute_spectrum(ModelParams(N, a))
    observed = [energies[0], energies[1], energies[N - 2], energies[N - 1]]
    assert observed == pytest.approx(REFERENCE_SPECTRA[(N, a)], rel=1e-8)


def test_single_site():
    assert compute_spectrum(ModelParams(1, 2)) == pytest.approx([3.0])


def test_two_sites():
    assert compute_spectrum(ModelParams(2, 2)) == pytest.approx([2.0, 6.0])


def test_laguerre_recurrence_is_exact():
    a = Fraction(2)
    assert laguerre_eval(0, a, Fraction(7)) == 1
    assert laguerre_eval(1, a, Fraction(7)) == a + 1 - 7
    assert laguerre_eval(2, a, Fraction(2)) == 0
    assert laguerre_eval(2, a, Fraction(6)) == 0


@pytest.mark.parametrize("a", [0.5, 1.0, 3.0])
def test_zeros_interlace(a):
    for N in range(2, 10):
        inner = compute_spectrum(ModelParams(N, a))
        outer = compute_spectrum(ModelParams(N + 1, a))
        assert np.all(outer[:-1] < inner)
        assert np.all(inner < outer[1:])
        assert inner[0] > 0


def test_dense_eigensolver_agrees():
    params = ModelParams(8, 1.5)
    np.testing.assert_allclose(dense_spectrum(params), compute_spectrum(params), rtol=1e-9)


def test_bisection_oracle_agrees():
    params = ModelParams(6, 1.0)
    np.testing.assert_allclose(laguerre_zeros_bisection(params), compute_spectrum(params), rtol=1e-10)


def test_symmetrization_needs_positive_weights():
    with pytest.raises(DomainError):
        symmetrized_jacobi(ModelParams(3, -1.5))
    diagonal, off = symmetrized_jacobi(ModelParams(3, 1.0))
    np.testing.assert_allclose(diagonal, [2.0, 4.0, 6.0])
    np.testing.assert_allclose(off, [-np.sqrt(2.0), -np.sqrt(6.0)])


def test_right_and_left_eigenvectors():
    params = ModelParams(6, 2.0)
    H = build_laguerre_hamiltonian(params).to_dense()
    spectral = spectral_data(params, unit_norm=True)
    for n, energy in enumerate(spectral.energies):
        psi = spectral.right_vectors[:, n]
        xi = spectral.left_vectors[:, n]
        assert np.linalg.norm(H @ psi - energy * psi) <= 1e-9 * spectral.energies[-1]
        assert np.linalg.norm(H.T @ xi - energy * xi) <= 1e-9 * spectral.energies[-1] * np.linalg.norm(xi)
    assert np.all(spectral.pairings > 0)


def test_unscaled_eigenvector_starts_with_one():
    params = ModelParams(5, 1.0)
    vector = right_eigenvector(params, compute_spectrum(params)[2])
    assert vector[0] == 1.0
    left, pairings = left_eigenvectors(params, compute_spectrum(params))
    assert left.shape == (5, 5)
    assert np.all(pairings > 0)


@pytest.mark.parametrize("N, a", [(4, 1.0), (6, 2.0), (9, 3.0)])
def test_biorthogonality(N, a):
    overlaps = biorthogonal_overlaps(spectral_data(ModelParams(N, a)))
    np.testing.assert_allclose(overlaps, np.eye(N), atol=1e-10)


def test_spectrum_table_layout():
    rows = spectrum_table([(2, 2.0), (3, 1.0)])
    assert rows[0][:2] == (2, 2.0)
    assert len(rows[0]) == 4
    assert len(rows[1]) == 5


@pytest.mark.parametrize("N", [6, 9])
def test_energies_grow_with_the_coupling(N):
    spectra = [compute_spectrum(ModelParams(N, a)) for a in (1.0, 2.0, 3.0)]
    for lower, upper in zip(spectra, spectra[1:]):
        assert np.all(upper > lower)
