"""
Laguerre polynomials, the real spectrum of the lattice Hamiltonian and its
biorthogonal eigenbasis.

The spectrum is obtained from the symmetrized matrix D H D^{-1}, D = Theta_0^{1/2},
which is the real symmetric Jacobi matrix with diagonal a + 2n - 1 and
off-diagonal -sqrt(n (a + n)); its eigenvalues are the zeros of L(N, a, z).
"""

import logging
import math

import numpy as np
from scipy.linalg import LinAlgError, eigvals, eigvalsh_tridiagonal

from algorithms import InterlacingRootSearch
from classes.hamiltonian import ModelParams, build_laguerre_hamiltonian
from classes.spectral_data import SpectralData
from closed_forms import p0
from definitions.errors import DegeneracyError, DomainError, NumericError
from definitions.global_constants import DEGENERACY_TOLERANCE

log = logging.getLogger(__name__)


def laguerre_eval(n: int, a, z):
    """
    L(n, a, z) from the three-term recurrence
    (m+1) L(m+1) = (a + 2m + 1 - z) L(m) - (a + m) L(m-1), L(-1) = 0, L(0) = 1.
    Exact when a and z are exact.

    :param n: The degree, n >= 0.
    :type n: int
    :param a: The coupling.
    :type a: Fraction | float
    :param z: The argument.
    :type z: Fraction | float

    :return: The polynomial value.
    :rtype: Fraction | float
    """
    return laguerre_values(n + 1, a, z)[n]


def laguerre_values(count: int, a, z) -> list:
    """ [L(0, a, z), ..., L(count - 1, a, z)]. """
    values = []
    previous, current = 0, 1
    for m in range(count):
        values.append(current)
        previous, current = current, ((a + 2 * m + 1 - z) * current - (a + m) * previous) / (m + 1)
    return values


def symmetrized_jacobi(params: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    """
    Diagonal and off-diagonal of D H D^{-1}.

    :param params: The model parameters.
    :type params: ModelParams

    :return: (diagonal, off-diagonal) as float arrays.
    :rtype: tuple[np.ndarray, np.ndarray]

    :raises DomainError: If a symmetrization weight n (a + n) is not positive.
    """
    a = float(params.a)
    n = np.arange(1, params.N + 1, dtype=float)
    weights = n[:-1] * (a + n[:-1])
    if np.any(weights <= 0):
        raise DomainError(f"symmetrization needs n (a + n) > 0 for all n < N; a = {a} violates it")
    return a + 2.0 * n - 1.0, -np.sqrt(weights)


def _check_degeneracy(energies: np.ndarray) -> None:
    if len(energies) < 2:
        return
    spread = energies[-1] - energies[0]
    gaps = np.diff(energies)
    if np.any(gaps <= DEGENERACY_TOLERANCE * spread):
        index = int(np.argmin(gaps))
        raise DegeneracyError(f"energies E_{index} and E_{index + 1} coincide within tolerance")


def compute_spectrum(params: ModelParams) -> np.ndarray:
    """
    The N real zeros of L(N, a, z) in ascending order.

    :param params: The model parameters; a > -1.
    :type params: ModelParams

    :return: The energies.
    :rtype: np.ndarray

    :raises DomainError: If a symmetrization weight is not positive.
    :raises NumericError: If the tridiagonal eigensolver fails.
    """
    diagonal, off = symmetrized_jacobi(params)
    if params.N == 1:
        return diagonal
    try:
        energies = eigvalsh_tridiagonal(diagonal, off)
    except LinAlgError as error:
        raise NumericError(f"tridiagonal eigensolver failed: {error}") from error
    energies = np.sort(energies)
    _check_degeneracy(energies)
    log.debug("spectrum N=%d a=%s: [%g, %g]", params.N, params.a, energies[0], energies[-1])
    return energies


def dense_spectrum(params: ModelParams) -> np.ndarray:
    """ Eigenvalues of the non-symmetric H from a general dense solver (cross-check). """
    values = eigvals(build_laguerre_hamiltonian(ModelParams(params.N, float(params.a))).to_dense())
    return np.sort(values.real)


def laguerre_zeros_bisection(params: ModelParams) -> np.ndarray:
    """
    Debug oracle: zeros of L(N, a, .) found degree by degree on interlacing brackets.

    :param params: The model parameters; a > -1.
    :type params: ModelParams

    :return: The zeros in ascending order.
    :rtype: np.ndarray
    """
    a, N = float(params.a), params.N
    if a <= -1:
        raise DomainError(f"interlacing brackets need a > -1, got {a}")
    upper = a + 2 * N + 2.0 * math.sqrt(N * (a + N))
    search = InterlacingRootSearch(lambda degree, z: laguerre_eval(degree, a, z), N, 0.0, upper)
    search.run(max_steps=N + 1)
    return np.array(search.zeros)


def right_eigenvector(params: ModelParams, energy, unit_norm: bool = False) -> np.ndarray:
    """
    Column (L(0, a, E), ..., L(N-1, a, E)).

    :param params: The model parameters.
    :type params: ModelParams
    :param energy: An energy, ideally a zero of L(N, a, .).
    :type energy: Fraction | float
    :param unit_norm: Rescale to unit 2-norm instead of first component 1.
    :type unit_norm: bool

    :return: The vector; object dtype when a and E are exact and no rescale is asked.
    :rtype: np.ndarray
    """
    values = laguerre_values(params.N, params.a, energy)
    if unit_norm:
        vector = np.array(values, dtype=float)
        return vector / np.linalg.norm(vector)
    if all(isinstance(value, (int, float)) for value in values):
        return np.array(values, dtype=float)
    return np.array(values, dtype=object)


def left_eigenvectors(params: ModelParams, energies, right_vectors: np.ndarray | None = None):
    """
    Left eigenvectors xi_n = Theta_0 psi_n with pairings t_n = <xi_n|psi_n> > 0.
    Theta_0 psi_n solves H^T xi = E_n xi because H^T Theta_0 = Theta_0 H.

    :param params: The model parameters.
    :type params: ModelParams
    :param energies: The spectrum.
    :type energies: np.ndarray
    :param right_vectors: The matching right eigenvectors as columns; rebuilt when omitted.
    :type right_vectors: np.ndarray | None

    :return: (left vectors as columns, pairings).
    :rtype: tuple[np.ndarray, np.ndarray]

    :raises DegeneracyError: If two energies coincide or a pairing vanishes.
    """
    energies = np.asarray(energies, dtype=float)
    _check_degeneracy(np.sort(energies))
    if right_vectors is None:
        right_vectors = np.column_stack([right_eigenvector(params, energy) for energy in energies])
    weights = np.array(p0(ModelParams(params.N, float(params.a))).matrix.bands[0], dtype=float)
    left = weights[:, None] * right_vectors
    pairings = np.einsum("ij,ij->j", left, right_vectors)
    if np.any(pairings == 0):
        raise DegeneracyError("a biorthogonal pairing vanished")
    signs = np.sign(pairings)
    return left * signs, pairings * signs


def spectral_data(params: ModelParams, unit_norm: bool = False) -> SpectralData:
    """
    Energies, right and left eigenvectors and pairings in one record.

    :param params: The model parameters.
    :type params: ModelParams
    :param unit_norm: Rescale right vectors to unit 2-norm.
    :type unit_norm: bool

    :return: The spectral data.
    :rtype: SpectralData
    """
    energies = compute_spectrum(params)
    right = np.column_stack([right_eigenvector(params, energy, unit_norm) for energy in energies])
    left, pairings = left_eigenvectors(params, energies, right)
    return SpectralData(params, energies, right, left, pairings)


def biorthogonal_overlaps(spectral: SpectralData) -> np.ndarray:
    """ <xi_m|psi_n> / sqrt(t_m t_n); the identity for a biorthogonal system. """
    overlaps = spectral.left_vectors.T @ spectral.right_vectors
    scale = np.sqrt(spectral.pairings)
    return overlaps / np.outer(scale, scale)


def spectrum_table(pairs) -> list:
    """
    One row (N, a, E_0, ..., E_{N-1}) per (N, a) pair.

    :param pairs: Iterable of (N, a).
    :type pairs: Iterable

    :return: The rows.
    :rtype: list[tuple]
    """
    return [(N, a, *compute_spectrum(ModelParams(N, a))) for N, a in pairs]
