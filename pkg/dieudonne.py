"""
Exact solver of the Dieudonne equation H^T Theta = Theta H restricted to
symmetric (2k+1)-banded Theta.

The unknowns theta_{m, m+d} are ordered band-major (all of band 0, then
band 1, ...). Every equation is an upper-triangle entry (i, j), 1 <= j - i <= k + 1,
of the antisymmetric matrix H^T Theta - Theta H. The nullspace of the
resulting linear map is computed by Gauss-Jordan elimination, exact over
fractions, and reduced to the normal form where P_j has first row e_{j+1}.
"""

import logging
from fractions import Fraction

import numpy as np

from classes.banded_matrix import BandedSymmetricMatrix
from classes.hamiltonian import ModelParams, TridiagonalHamiltonian
from classes.pseudometrics import PseudometricSet
from definitions.errors import DimensionError, NormalizationError, StructureError
from definitions.global_constants import PIVOT_TOLERANCE
from utils.scalars import abs_max, format_scalar, is_exact

log = logging.getLogger(__name__)


def dieudonne_commutator(hamiltonian: TridiagonalHamiltonian, theta: BandedSymmetricMatrix) -> np.ndarray:
    """
    The matrix H^T Theta - Theta H (object dtype when the inputs are exact).

    :param hamiltonian: The Hamiltonian.
    :type hamiltonian: TridiagonalHamiltonian
    :param theta: The metric candidate.
    :type theta: BandedSymmetricMatrix

    :return: The N x N commutator-like matrix.
    :rtype: np.ndarray

    :raises DimensionError: If the dimensions differ.
    """
    n = hamiltonian.n
    if theta.n != n:
        raise DimensionError(f"Hamiltonian of dimension {n} paired with a metric of dimension {theta.n}")
    exact = theta.is_exact() and all(is_exact(x) for x in hamiltonian.diag + hamiltonian.sup + hamiltonian.sub)
    result = np.full((n, n), Fraction(0), dtype=object) if exact else np.zeros((n, n))
    for i in range(n):
        for j in range(max(0, i - theta.k - 1), min(n, i + theta.k + 2)):
            value = 0
            for l in (i - 1, i, i + 1):
                value += hamiltonian.entry(l, i) * theta.entry(l, j)
            for l in (j - 1, j, j + 1):
                value -= theta.entry(i, l) * hamiltonian.entry(l, j)
            result[i, j] = value
    return result


def dieudonne_residual(hamiltonian: TridiagonalHamiltonian, theta: BandedSymmetricMatrix):
    """
    Max-norm of H^T Theta - Theta H; exactly zero for exact solutions.

    :param hamiltonian: The Hamiltonian.
    :type hamiltonian: TridiagonalHamiltonian
    :param theta: The metric candidate.
    :type theta: BandedSymmetricMatrix

    :return: The residual.
    :rtype: Fraction | float
    """
    return abs_max(dieudonne_commutator(hamiltonian, theta).ravel())


def _band_offsets(n: int, k: int) -> list:
    offsets = [0]
    for d in range(k):
        offsets.append(offsets[-1] + n - d)
    return offsets


def unknown_count(n: int, k: int) -> int:
    return sum(n - d for d in range(k + 1))


def constraint_matrix(hamiltonian: TridiagonalHamiltonian, k: int) -> list:
    """
    Rows of the linear map Theta -> H^T Theta - Theta H on the band unknowns.

    :param hamiltonian: The Hamiltonian.
    :type hamiltonian: TridiagonalHamiltonian
    :param k: The band half-width.
    :type k: int

    :return: One list of coefficients per equation (i, j), i < j.
    :rtype: list[list]
    """
    n = hamiltonian.n
    offsets = _band_offsets(n, k)
    size = unknown_count(n, k)
    exact = all(is_exact(x) for x in hamiltonian.diag + hamiltonian.sup + hamiltonian.sub)
    zero = Fraction(0) if exact else 0.0

    def unknown(row: int, col: int):
        if row > col:
            row, col = col, row
        if row < 0 or col >= n or col - row > k:
            return None
        return offsets[col - row] + row

    rows = []
    for i in range(n):
        for j in range(i + 1, min(n, i + k + 2)):
            coefficients = [zero] * size
            for l in (i - 1, i, i + 1):
                index = unknown(l, j)
                if index is not None:
                    coefficients[index] += hamiltonian.entry(l, i)
            for l in (j - 1, j, j + 1):
                index = unknown(i, l)
                if index is not None:
                    coefficients[index] -= hamiltonian.entry(l, j)
            rows.append(coefficients)
    return rows


def _bit_size(value) -> int:
    value = Fraction(value)
    return abs(value.numerator).bit_length() + value.denominator.bit_length()


def nullspace(rows: list, size: int) -> list:
    """
    Nullspace basis by Gauss-Jordan elimination.
    Exact rows are pivoted on the entry of smallest bit size; float rows use
    partial pivoting with a norm-relative zero threshold.

    :param rows: The coefficient rows.
    :type rows: list[list]
    :param size: The number of unknowns.
    :type size: int

    :return: The basis vectors, one per free unknown.
    :rtype: list[list]
    """
    matrix = [list(row) for row in rows]
    exact = all(is_exact(value) for row in matrix for value in row)
    scale = max((abs(value) for row in matrix for value in row), default=0)
    threshold = 0 if exact else PIVOT_TOLERANCE * float(scale or 1)

    def nonzero(value) -> bool:
        return value != 0 if exact else abs(value) > threshold

    pivots = []
    r = 0
    for c in range(size):
        candidates = [i for i in range(r, len(matrix)) if nonzero(matrix[i][c])]
        if not candidates:
            continue
        if exact:
            p = min(candidates, key=lambda i: _bit_size(matrix[i][c]))
        else:
            p = max(candidates, key=lambda i: abs(matrix[i][c]))
        matrix[r], matrix[p] = matrix[p], matrix[r]
        pivot = matrix[r][c]
        matrix[r] = [value / pivot for value in matrix[r]]
        for i in range(len(matrix)):
            if i != r and nonzero(matrix[i][c]):
                factor = matrix[i][c]
                matrix[i] = [x - factor * y for x, y in zip(matrix[i], matrix[r])]
        pivots.append(c)
        r += 1
        if r == len(matrix):
            break
    pivot_set = set(pivots)
    zero, one = (Fraction(0), Fraction(1)) if exact else (0.0, 1.0)
    basis = []
    for free in (c for c in range(size) if c not in pivot_set):
        vector = [zero] * size
        vector[free] = one
        for row, c in enumerate(pivots):
            vector[c] = -matrix[row][free]
        basis.append(vector)
    log.debug("elimination: %d unknowns, rank %d, nullity %d", size, len(pivots), len(basis))
    return basis


def nullspace_dimension(hamiltonian: TridiagonalHamiltonian, k: int) -> int:
    """ Dimension of the space of symmetric (2k+1)-banded solutions. """
    return len(nullspace(constraint_matrix(hamiltonian, k), unknown_count(hamiltonian.n, k)))


def matrix_to_vector(matrix: BandedSymmetricMatrix, k: int) -> list:
    """ Flattens a band matrix into the band-major unknown vector of width k. """
    widened = matrix.widen(k)
    return [value for band in widened.bands for value in band]


def vector_to_matrix(vector: list, n: int, k: int) -> BandedSymmetricMatrix:
    offsets = _band_offsets(n, k)
    return BandedSymmetricMatrix(n, k, [vector[offsets[d]:offsets[d] + n - d] for d in range(k + 1)])


def _trim(matrix: BandedSymmetricMatrix, j: int) -> BandedSymmetricMatrix:
    threshold = 0 if matrix.is_exact() else 1e-9 * float(matrix.max_abs() or 1)
    if any(abs(value) > threshold for band in matrix.bands[j + 1:] for value in band):
        raise NormalizationError(f"pseudometric of degree {j} has entries beyond band {j}")
    return BandedSymmetricMatrix(matrix.n, j, matrix.bands[:j + 1])


def reduce_to_normal_form(basis: list, n: int, k: int) -> list:
    """
    Recombines a nullspace basis so that member j has first row e_{j+1}.
    Elimination acts on the first-row entries theta_{1,1..k+1}; the rest of
    each vector follows along.

    :param basis: k+1 band-major vectors spanning the solution space.
    :type basis: list[list]
    :param n: The dimension.
    :type n: int
    :param k: The band half-width.
    :type k: int

    :return: The normalized vectors P_0..P_k.
    :rtype: list[list]

    :raises NormalizationError: If the first-row block is singular.
    """
    offsets = _band_offsets(n, k)
    rows = [list(vector) for vector in basis]
    exact = all(is_exact(value) for row in rows for value in row)
    scale = max((abs(value) for row in rows for value in row), default=0)
    threshold = 0 if exact else PIVOT_TOLERANCE * float(scale or 1)
    for d in range(k + 1):
        column = offsets[d]
        candidates = [i for i in range(d, len(rows)) if abs(rows[i][column]) > threshold]
        if not candidates:
            raise NormalizationError(f"no solution with theta_(1,{d + 1}) != 0")
        p = candidates[0] if exact else max(candidates, key=lambda i: abs(rows[i][column]))
        rows[d], rows[p] = rows[p], rows[d]
        pivot = rows[d][column]
        rows[d] = [value / pivot for value in rows[d]]
        for i in range(len(rows)):
            if i != d and rows[i][column] != 0:
                factor = rows[i][column]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[d])]
    return rows


def solve_band_pseudometrics(hamiltonian: TridiagonalHamiltonian, k: int,
                             params: ModelParams | None = None) -> PseudometricSet:
    """
    Solves H^T Theta = Theta H on symmetric (2k+1)-banded matrices and returns
    the normalized pseudometrics P_0..P_k.

    :param hamiltonian: The Hamiltonian; exact entries give exact results.
    :type hamiltonian: TridiagonalHamiltonian
    :param k: The band half-width.
    :type k: int
    :param params: Model parameters recorded in the result, if any.
    :type params: ModelParams | None

    :return: The pseudometric set.
    :rtype: PseudometricSet

    :raises DimensionError: If n < k+1 or k < 0.
    :raises StructureError: If the nullspace dimension is not k+1.
    :raises NormalizationError: If the normal form is unreachable.
    """
    n = hamiltonian.n
    if k < 0 or n < k + 1:
        raise DimensionError(f"band half-width {k} needs dimension >= {k + 1}, got {n}")
    basis = nullspace(constraint_matrix(hamiltonian, k), unknown_count(n, k))
    if len(basis) != k + 1:
        raise StructureError(f"solution space has dimension {len(basis)}, expected {k + 1}")
    normal = reduce_to_normal_form(basis, n, k)
    matrices = tuple(_trim(vector_to_matrix(vector, n, k), j) for j, vector in enumerate(normal))
    log.info("solved %d pseudometrics at N=%d", k + 1, n)
    return PseudometricSet(hamiltonian, k, matrices, params)


def solve_general_metric(hamiltonian: TridiagonalHamiltonian, k: int, alphas,
                         pseudometrics: PseudometricSet | None = None) -> BandedSymmetricMatrix:
    """
    The superposition Theta = P_0 + sum_j alpha_j P_j.

    :param hamiltonian: The Hamiltonian.
    :type hamiltonian: TridiagonalHamiltonian
    :param k: The band half-width.
    :type k: int
    :param alphas: k coefficients alpha_1..alpha_k.
    :type alphas: Sequence
    :param pseudometrics: A previously solved set, reused when given.
    :type pseudometrics: PseudometricSet | None

    :return: The (2k+1)-banded metric candidate.
    :rtype: BandedSymmetricMatrix
    """
    alphas = list(alphas)
    if len(alphas) != k:
        raise DimensionError(f"{k} coefficients expected, got {len(alphas)}")
    if pseudometrics is None:
        pseudometrics = solve_band_pseudometrics(hamiltonian, k)
    theta = pseudometrics[0].widen(k)
    for alpha, matrix in zip(alphas, pseudometrics.matrices[1:]):
        theta = theta + matrix.scale(alpha)
    return theta


def pseudometrics_to_dict(pseudometrics: PseudometricSet, theta: BandedSymmetricMatrix | None = None,
                          provenance: list | None = None) -> dict:
    """
    JSON dump {"N", "a", "k", "P": [{"j", "bands"}]} with exact fractions as strings.

    :param pseudometrics: The pseudometrics.
    :type pseudometrics: PseudometricSet
    :param theta: An assembled metric, dumped under "theta" when given.
    :type theta: BandedSymmetricMatrix | None
    :param provenance: Per-matrix provenance bands, added to each "P" record when given.
    :type provenance: list[list[list[str]]] | None

    :return: The dump.
    :rtype: dict
    """
    params = pseudometrics.params
    records = [{"j": j, "bands": matrix.to_dict()["bands"]} for j, matrix in enumerate(pseudometrics.matrices)]
    if provenance is not None:
        for record, bands in zip(records, provenance):
            record["provenance"] = bands
    data = {
        "N": pseudometrics.hamiltonian.n,
        "a": format_scalar(params.a) if params is not None else None,
        "k": pseudometrics.k,
        "P": records,
    }
    if theta is not None:
        data["theta"] = {"bands": theta.to_dict()["bands"]}
    return data
