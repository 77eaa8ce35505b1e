"""
Physical layer on top of an assembled metric: positivity, Dyson maps, the
hidden conjugate of H, spectral weights, the smeared position operator and
time evolution.

All dense work is done in double precision; exact band matrices are
converted on entry. The positivity test alone keeps exact inputs exact.
"""

import logging
from fractions import Fraction

import numpy as np
from scipy.linalg import LinAlgError, eigh, solve

from algorithms import AlphaBoundarySearch
from classes.banded_matrix import BandedSymmetricMatrix
from classes.hamiltonian import ModelParams, TridiagonalHamiltonian, build_laguerre_hamiltonian
from classes.metric_family import MetricFamily, PositivityVerdict
from classes.physical import DysonMap, EvolutionResult, PositionModel
from classes.spectral_data import SpectralData
from closed_forms import MAX_CLOSED_DEGREE, closed_form, p0, p1
from definitions.errors import DimensionError, DomainError
from definitions.global_constants import (DEFAULT_ALPHA_CAP, RECONSTRUCTION_TOLERANCE,
                                          SINGULARITY_TOLERANCE)
from definitions.states import DysonVariant, Positivity
from dieudonne import solve_band_pseudometrics
from spectrum import spectral_data

log = logging.getLogger(__name__)


def _dense(matrix) -> np.ndarray:
    if isinstance(matrix, (BandedSymmetricMatrix, TridiagonalHamiltonian)):
        return matrix.to_dense(float)
    return np.asarray(matrix, dtype=float)


def _float_params(params: ModelParams) -> ModelParams:
    return ModelParams(params.N, float(params.a))


def _solve(matrix: np.ndarray, rhs: np.ndarray, name: str, **options) -> np.ndarray:
    # scipy may return inf/nan for a singular diagonal matrix without raising
    try:
        result = solve(matrix, rhs, **options)
    except LinAlgError as error:
        raise DomainError(f"{name} is singular: {error}") from error
    if not np.all(np.isfinite(result)):
        raise DomainError(f"{name} is singular")
    return result


def ldl_factor(matrix):
    """
    Unpivoted LDL^T factorization that stops at the first non-positive pivot.
    Exact (object dtype) input is factored exactly.

    :param matrix: A symmetric N x N matrix.
    :type matrix: np.ndarray

    :return: (unit lower factor L, pivots d, index of the failing pivot or None).
    :rtype: tuple[np.ndarray, list, int | None]
    """
    n = matrix.shape[0]
    exact = matrix.dtype == object
    lower = np.eye(n, dtype=object if exact else float)
    if exact:
        threshold = 0
    else:
        threshold = SINGULARITY_TOLERANCE * max(float(np.max(np.abs(matrix))), 1.0)
    pivots = []
    for i in range(n):
        for j in range(i):
            value = matrix[i, j] - sum(lower[i, m] * lower[j, m] * pivots[m] for m in range(j))
            lower[i, j] = value / pivots[j]
        pivot = matrix[i, i] - sum(lower[i, m] * lower[i, m] * pivots[m] for m in range(i))
        pivots.append(pivot)
        if pivot <= threshold:
            log.debug("pivot %d = %s is not positive", i, pivot)
            return lower, pivots, i
    return lower, pivots, None


def _negative_direction(lower: np.ndarray, index: int) -> np.ndarray:
    # Solves L_lead^T v = e_index on the leading block, so v^T Theta v = d_index.
    n = lower.shape[0]
    direction = [Fraction(0) if lower.dtype == object else 0.0] * n
    direction[index] = direction[index] + 1
    for row in range(index - 1, -1, -1):
        direction[row] = -sum(lower[col, row] * direction[col] for col in range(row + 1, index + 1))
    return np.array(direction, dtype=lower.dtype)


def check_positive_definite(theta) -> PositivityVerdict:
    """
    Classifies a symmetric matrix by attempting a symmetric triangular factorization.
    On success the witness is the Cholesky factor C with C C^T = Theta; on
    failure it is a direction v, supported on the leading block up to the
    failing pivot, with v^T Theta v <= 0.

    :param theta: The symmetric matrix, band or dense; exact band input is factored exactly.
    :type theta: BandedSymmetricMatrix | np.ndarray

    :return: The verdict.
    :rtype: PositivityVerdict
    """
    if isinstance(theta, BandedSymmetricMatrix) and theta.is_exact():
        matrix = theta.to_dense(object)
    else:
        matrix = _dense(theta)
    lower, pivots, failed = ldl_factor(matrix)
    if failed is not None:
        witness = _negative_direction(lower, failed)
        return PositivityVerdict(Positivity.INDEFINITE, witness, failed, tuple(pivots))
    roots = np.sqrt(np.array(pivots, dtype=float))
    factor = np.array(lower, dtype=float) * roots[None, :]
    return PositivityVerdict(Positivity.POSITIVE_DEFINITE, factor, None, tuple(pivots))


def classify(family: MetricFamily) -> MetricFamily:
    """ The same family member with its positivity settled. """
    verdict = check_positive_definite(family.theta)
    return family.with_positivity(verdict.positivity, verdict.witness)


def pseudometric_stack(params: ModelParams, k: int) -> list:
    """
    Dense float P_0..P_k, from the closed forms when k <= 3 and from the exact solver beyond.

    :param params: The model parameters.
    :type params: ModelParams
    :param k: The largest degree.
    :type k: int

    :return: The matrices.
    :rtype: list[np.ndarray]
    """
    if k <= MAX_CLOSED_DEGREE:
        return [closed_form(params, j).matrix.to_dense(float) for j in range(k + 1)]
    solved = solve_band_pseudometrics(build_laguerre_hamiltonian(params), k, params)
    return [matrix.to_dense(float) for matrix in solved.matrices]


def find_alpha_boundary(params: ModelParams, k: int, direction=(), cap: float = DEFAULT_ALPHA_CAP,
                        pseudometrics=None) -> tuple:
    """
    Largest t such that Theta(t * direction) = P_0 + t sum_j direction_j P_j
    stays positive definite, found by doubling and bisection.

    :param params: The model parameters.
    :type params: ModelParams
    :param k: The band half-width; for k = 0 the direction is ignored.
    :type k: int
    :param direction: A direction in (alpha_1, ..., alpha_k) space, normalized here.
    :type direction: Sequence[float]
    :param cap: The largest t explored.
    :type cap: float
    :param pseudometrics: P_0..P_k already at hand; built by ``pseudometric_stack`` when omitted.
    :type pseudometrics: Sequence[BandedSymmetricMatrix | np.ndarray] | None

    :return: (t_max, capped) where capped tells that positivity survived up to ``cap``.
    :rtype: tuple[float, bool]

    :raises DomainError: If P_0 is not positive definite or the direction is zero.
    :raises DimensionError: If fewer than k+1 pseudometrics are given.
    """
    direction = np.asarray(direction if k else (), dtype=float)
    if len(direction) != k:
        raise DimensionError(f"direction must have {k} components, got {len(direction)}")
    if k:
        norm = np.linalg.norm(direction)
        if norm == 0:
            raise DomainError("the search direction must be nonzero")
        direction = direction / norm
    if pseudometrics is None:
        stack = pseudometric_stack(params, k)
    elif len(pseudometrics) < k + 1:
        raise DimensionError(f"{k + 1} pseudometrics expected, got {len(pseudometrics)}")
    else:
        stack = [_dense(matrix) for matrix in pseudometrics[:k + 1]]
    base = stack[0]
    if not check_positive_definite(base).positivity.is_positive_definite():
        raise DomainError(f"P_0 is not positive definite at a = {params.a}")
    step = sum((weight * matrix for weight, matrix in zip(direction, stack[1:])), np.zeros_like(base))

    def is_positive(matrix: np.ndarray) -> bool:
        return check_positive_definite(matrix).positivity.is_positive_definite()

    search = AlphaBoundarySearch(lambda t: base + t * step, is_positive, cap)
    search.run()
    log.info("positivity boundary along %s: %g%s", direction, search.boundary, " (capped)" if search.capped else "")
    return search.boundary, search.capped


def dyson_sqrt(theta) -> DysonMap:
    """
    The symmetric positive square root of a positive-definite metric.

    :param theta: The metric.
    :type theta: BandedSymmetricMatrix | np.ndarray

    :return: Omega with Omega Omega = Theta.
    :rtype: DysonMap

    :raises DomainError: If Theta is not positive definite.
    """
    matrix = _dense(theta)
    values, vectors = eigh(matrix)
    if values[0] <= SINGULARITY_TOLERANCE * max(abs(values[-1]), 1.0):
        raise DomainError(f"metric is not positive definite (smallest eigenvalue {values[0]:.3e})")
    omega = (vectors * np.sqrt(values)) @ vectors.T
    return DysonMap(0.5 * (omega + omega.T), DysonVariant.SYMMETRIC_SQRT)


def dyson_first_order(params: ModelParams, alpha) -> DysonMap:
    """
    First-order factor of Theta = P_0 + alpha P_1:
    Omega = D + alpha/2 D^{-1} P_1 with D = P_0^{1/2}.
    Omega^T Omega differs from Theta by exactly alpha^2/4 P_1 D^{-2} P_1.

    :param params: The model parameters, N >= 2.
    :type params: ModelParams
    :param alpha: The coefficient of P_1.
    :type alpha: float

    :return: The approximate map.
    :rtype: DysonMap
    """
    weights = np.array(p0(params).matrix.bands[0], dtype=float)
    if np.any(weights <= 0):
        raise DomainError(f"P_0 is not positive at a = {params.a}")
    root = np.sqrt(weights)
    pseudometric = p1(params).matrix.to_dense(float)
    omega = np.diag(root) + 0.5 * float(alpha) * pseudometric / root[:, None]
    return DysonMap(omega, DysonVariant.FIRST_ORDER)


def hidden_conjugate(hamiltonian, theta) -> np.ndarray:
    """
    H^double-dagger = Theta^{-1} H^T Theta, equal to H when H is Theta-self-adjoint.

    :param hamiltonian: The Hamiltonian.
    :type hamiltonian: TridiagonalHamiltonian | np.ndarray
    :param theta: An invertible metric candidate.
    :type theta: BandedSymmetricMatrix | np.ndarray

    :return: The conjugate.
    :rtype: np.ndarray

    :raises DomainError: If Theta is singular.
    """
    matrix = _dense(hamiltonian)
    metric = _dense(theta)
    return _solve(metric, matrix.T @ metric, "metric", assume_a="sym")


def similarity_transform(hamiltonian, dyson: DysonMap) -> np.ndarray:
    """ h = Omega H Omega^{-1}; symmetric when Omega factorizes a metric of H exactly. """
    matrix = _dense(hamiltonian)
    omega = dyson.omega
    return _solve(omega.T, (omega @ matrix).T, "Dyson map").T


def spectral_decompose(theta, spectral: SpectralData) -> np.ndarray:
    """
    Weights kappa2_n = <psi_n|Theta|psi_n> / t_n^2 of the expansion
    Theta = sum_n kappa2_n |xi_n><xi_n|.

    :param theta: A metric candidate solving H^T Theta = Theta H.
    :type theta: BandedSymmetricMatrix | np.ndarray
    :param spectral: The biorthogonal basis of H.
    :type spectral: SpectralData

    :return: The N weights.
    :rtype: np.ndarray

    :raises DomainError: If the weights do not reconstruct Theta, i.e. Theta is no metric of H.
    """
    matrix = _dense(theta)
    if matrix.shape[0] != spectral.size:
        raise DimensionError(f"metric of size {matrix.shape[0]} against a spectrum of size {spectral.size}")
    right = spectral.right_vectors
    kappa2 = np.einsum("in,ij,jn->n", right, matrix, right) / spectral.pairings ** 2
    error = np.linalg.norm(spectral_metric(spectral, kappa2) - matrix) / np.linalg.norm(matrix)
    if error > RECONSTRUCTION_TOLERANCE:
        raise DomainError(f"spectral reconstruction misses by {error:.3e}; the matrix does not solve H^T Theta = Theta H")
    return kappa2


def spectral_metric(spectral: SpectralData, kappa2) -> np.ndarray:
    """ The dense metric sum_n kappa2_n |xi_n><xi_n| from arbitrary weights. """
    left = spectral.left_vectors
    return (left * np.asarray(kappa2, dtype=float)) @ left.T


def off_tridiagonal_mass(matrix) -> float:
    """ Frobenius norm of the entries with |i - j| > 1. """
    matrix = np.asarray(matrix)
    rows, cols = np.indices(matrix.shape)
    return float(np.linalg.norm(matrix[np.abs(rows - cols) > 1]))


def position_operator(dyson: DysonMap, sites=None) -> PositionModel:
    """
    Q = Omega^{-1} q Omega with q = diag(sites) and its eigenvectors chi_s = Omega^{-1} e_s.

    :param dyson: The Dyson map.
    :type dyson: DysonMap
    :param sites: Strictly increasing coordinates q_1..q_N; defaults to q_s = s.
    :type sites: Sequence[float] | None

    :return: The position model.
    :rtype: PositionModel

    :raises DomainError: If Omega is singular or the sites do not increase.
    """
    n = dyson.n
    sites = np.arange(1.0, n + 1.0) if sites is None else np.asarray(sites, dtype=float)
    if sites.shape != (n,):
        raise DimensionError(f"{n} site coordinates expected, got {sites.shape}")
    if np.any(np.diff(sites) <= 0):
        raise DomainError("site coordinates must be strictly increasing")
    q_hat = np.diag(sites)
    chi = _solve(dyson.omega, np.eye(n), "Dyson map")
    Q = chi @ q_hat @ dyson.omega
    return PositionModel(sites, q_hat, Q, chi, off_tridiagonal_mass(Q))


def theta_norm(theta, psi) -> float:
    """ <psi|Theta|psi> for a possibly complex state. """
    psi = np.asarray(psi)
    return float(np.real(np.conj(psi) @ _dense(theta) @ psi))


def evolve(params: ModelParams, theta, initial, times, sites=None) -> EvolutionResult:
    """
    Evolves ``initial`` under H in the biorthogonal eigenbasis:
    psi(t) = sum_n c_n exp(-i E_n t) psi_n with c_n = <xi_n|initial> / t_n.
    Site probabilities are rho(t, s) = |<chi_s|Theta|psi(t)>|^2 normalized over s.

    :param params: The model parameters.
    :type params: ModelParams
    :param theta: A positive-definite metric of H.
    :type theta: BandedSymmetricMatrix | np.ndarray
    :param initial: The nonzero initial state.
    :type initial: Sequence
    :param times: The time grid.
    :type times: Sequence[float]
    :param sites: Site coordinates passed to the position operator.
    :type sites: Sequence[float] | None

    :return: The trajectory.
    :rtype: EvolutionResult

    :raises DomainError: If Theta is not positive definite or the initial state vanishes.
    """
    metric = _dense(theta)
    initial = np.asarray(initial, dtype=complex)
    if initial.shape != (params.N,) or metric.shape != (params.N, params.N):
        raise DimensionError(f"state and metric must match N = {params.N}")
    if not np.any(initial):
        raise DomainError("the initial state must be nonzero")
    if not check_positive_definite(metric).positivity.is_positive_definite():
        raise DomainError("site probabilities need a positive-definite metric")
    spectral = spectral_data(_float_params(params), unit_norm=True)
    coefficients = (spectral.left_vectors.T @ initial) / spectral.pairings
    times = np.asarray(times, dtype=float)
    phases = np.exp(-1j * np.outer(times, spectral.energies))
    wavefunctions = (phases * coefficients) @ spectral.right_vectors.T
    smeared = wavefunctions @ metric
    position = position_operator(dyson_sqrt(metric), sites)
    amplitudes = smeared @ position.chi
    probabilities = np.abs(amplitudes) ** 2
    probabilities /= probabilities.sum(axis=1, keepdims=True)
    log.info("evolved N=%d over %d time points", params.N, len(times))
    return EvolutionResult(times, probabilities, wavefunctions, smeared)


def norm_trajectory(theta, result: EvolutionResult) -> np.ndarray:
    """ <psi(t)|Theta|psi(t)> along a trajectory. """
    metric = _dense(theta)
    return np.real(np.einsum("ti,ij,tj->t", np.conj(result.wavefunctions), metric, result.wavefunctions))
