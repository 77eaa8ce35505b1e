"""
Pseudometrics P_0..P_3 of the Laguerre Hamiltonian from closed formulas.

Throughout, prod(m) = (a+1)(a+2)...(a+m) with prod(0) = 1 and n is 1-based.
Bulk elements are cutoff-insensitive; the boundary elements (N, N) for
j = 2, 3 and (N-1, N) for j = 3 depend on N and come from separately
extrapolated formulas. Those are compared with the exact solver whenever a
table holding them is built, once per (N, a, j).

Two printed bulk formulas are replaced by the forms that reproduce the
tabulated elements and the exact solver:
  j = 1 diagonal: printed (n-1)!/prod(n-1), used  -2(n-1)(n-1)!/prod(n-1)
  j = 3 diagonal: printed factor (a+5n-6),  used  (3a+5n-6)
"""

import logging
from fractions import Fraction
from functools import lru_cache
from math import factorial

from classes.banded_matrix import BandedSymmetricMatrix
from classes.hamiltonian import ModelParams, build_laguerre_hamiltonian
from classes.metric_family import MetricFamily
from classes.pseudometrics import ClosedFormTable
from definitions.errors import ConjectureViolationError, DimensionError
from definitions.global_constants import Backend
from definitions.states import Provenance
from dieudonne import solve_band_pseudometrics

log = logging.getLogger(__name__)

MAX_CLOSED_DEGREE = 3


def _ratio(p: int, q: int, params: ModelParams):
    if params.backend == Backend.RATIONAL:
        return Fraction(p, q)
    return p / q


def rising_product(a, m: int):
    """
    prod_{i=1}^{m} (a + i), the empty product being 1.

    :param a: The coupling.
    :type a: Fraction | float
    :param m: The number of factors.
    :type m: int

    :return: The product, in the backend of ``a``.
    :rtype: Fraction | float
    """
    result = a - a + 1
    for i in range(1, m + 1):
        result *= a + i
    return result


def _require(params: ModelParams, j: int) -> None:
    if params.N < j + 1:
        raise DimensionError(f"pseudometric of degree {j} needs N >= {j + 1}, got N = {params.N}")


def _table(params: ModelParams, j: int, bulk: dict, boundary: dict | None = None) -> ClosedFormTable:
    """
    Evaluates the band rules into a matrix and records provenance.
    ``bulk`` maps the band offset d to (rule(n), provenance); ``boundary`` maps
    1-based positions to (value, provenance) overriding the bulk rule.
    """
    boundary = boundary or {}
    provenance = {}

    def element(m: int, mm: int):
        if (m, mm) in boundary:
            value, origin = boundary[(m, mm)]
        else:
            rule, origin = bulk[mm - m]
            value = rule(m)
        provenance[(m, mm)] = origin
        return value

    matrix = BandedSymmetricMatrix.from_function(params.N, j, element)
    return ClosedFormTable(params, j, matrix, provenance)


def p0(params: ModelParams) -> ClosedFormTable:
    """
    Diagonal metric theta_nn = (n-1)!/prod(n-1); theta_11 = 1, theta_22 = 1/(a+1).

    :param params: The model parameters.
    :type params: ModelParams

    :return: P_0 with provenance.
    :rtype: ClosedFormTable
    """
    a = params.a
    return _table(params, 0, {
        0: (lambda n: factorial(n - 1) / rising_product(a, n - 1), Provenance.LEMMA1),
    })


def p1(params: ModelParams) -> ClosedFormTable:
    """
    Tridiagonal pseudometric:
    theta_{n,n+1} = n!/prod(n-1), theta_nn = -2(n-1)(n-1)!/prod(n-1).
    """
    _require(params, 1)
    a = params.a
    return _table(params, 1, {
        0: (lambda n: -2 * (n - 1) * factorial(n - 1) / rising_product(a, n - 1), Provenance.LEMMA2_CORRECTED),
        1: (lambda n: factorial(n) / rising_product(a, n - 1), Provenance.LEMMA2),
    })


def exceptional_nn(params: ModelParams, j: int):
    """
    The cutoff-dependent corner element (N, N) of P_2 or P_3.

    :param params: The model parameters.
    :type params: ModelParams
    :param j: The degree, 2 or 3.
    :type j: int

    :return: The corner element.
    :rtype: Fraction | float
    """
    N, a = params.N, params.a
    if j == 2:
        return (N - 2) * factorial(N - 1) * (a + 5 * N - 4) * _ratio(1, 2, params) / rising_product(a, N - 1)
    if j == 3:
        bracket = (3 * N - 4) * a + 7 * N * N - 16 * N + 8
        return -(N - 3) * factorial(N - 1) * bracket * _ratio(1, 3, params) / rising_product(a, N - 1)
    raise DimensionError(f"no exceptional diagonal element for degree {j}")


def exceptional_n1n(params: ModelParams):
    """ The cutoff-dependent element (N-1, N) of P_3. """
    N, a = params.N, params.a
    return (N - 3) * factorial(N - 1) * (a + 7 * N - 12) * _ratio(1, 3, params) / rising_product(a, N - 2)


def p2(params: ModelParams, verify: bool = False, check_conjectures: bool = True) -> ClosedFormTable:
    """
    Pentadiagonal pseudometric, normalized by theta_13 = 1:
    theta_nn = (n-1)(n-1)!(a+3n-4)/prod(n-1),
    theta_{n,n+1} = -2(n-1)n!/prod(n-1),
    theta_{n,n+2} = (n+1)!/(2 prod(n-1)),
    except the corner (N, N).

    :param params: The model parameters.
    :type params: ModelParams
    :param verify: Check every element against the exact solver.
    :type verify: bool
    :param check_conjectures: Check the corner element against the exact solver.
    :type check_conjectures: bool

    :return: P_2 with provenance.
    :rtype: ClosedFormTable

    :raises ConjectureViolationError: If a checked element disagrees with the solver.
    """
    _require(params, 2)
    a, N, half = params.a, params.N, _ratio(1, 2, params)
    table = _table(params, 2, {
        0: (lambda n: (n - 1) * factorial(n - 1) * (a + 3 * n - 4) / rising_product(a, n - 1), Provenance.LEMMA3),
        1: (lambda n: -2 * (n - 1) * factorial(n) / rising_product(a, n - 1), Provenance.LEMMA3),
        2: (lambda n: factorial(n + 1) * half / rising_product(a, n - 1), Provenance.LEMMA3),
    }, {
        (N, N): (exceptional_nn(params, 2), Provenance.CONJECTURE1),
    })
    return _checked(table, verify, check_conjectures)


def p3(params: ModelParams, verify: bool = False, check_conjectures: bool = True) -> ClosedFormTable:
    """
    Heptadiagonal pseudometric, normalized by theta_14 = 1:
    theta_nn = -2(n-1)(n-2)(n-1)!(3a+5n-6)/(3 prod(n-1)),
    theta_{n,n+1} = (n-1)n!(a+5n-7)/(2 prod(n-1)),
    theta_{n,n+2} = -(n-1)(n+1)!/prod(n-1),
    theta_{n,n+3} = (n+2)!/(6 prod(n-1)),
    except the boundary elements (N, N) and (N-1, N).
    """
    _require(params, 3)
    a, N = params.a, params.N
    third, half, sixth = _ratio(1, 3, params), _ratio(1, 2, params), _ratio(1, 6, params)
    table = _table(params, 3, {
        0: (lambda n: -2 * (n - 1) * (n - 2) * factorial(n - 1) * (3 * a + 5 * n - 6) * third
            / rising_product(a, n - 1), Provenance.LEMMA4_CORRECTED),
        1: (lambda n: (n - 1) * factorial(n) * (a + 5 * n - 7) * half / rising_product(a, n - 1), Provenance.LEMMA4),
        2: (lambda n: -(n - 1) * factorial(n + 1) / rising_product(a, n - 1), Provenance.LEMMA4),
        3: (lambda n: factorial(n + 2) * sixth / rising_product(a, n - 1), Provenance.LEMMA4),
    }, {
        (N, N): (exceptional_nn(params, 3), Provenance.CONJECTURE2),
        (N - 1, N): (exceptional_n1n(params), Provenance.CONJECTURE3),
    })
    return _checked(table, verify, check_conjectures)


_BUILDERS = (p0, p1, p2, p3)


def _checked(table: ClosedFormTable, verify: bool, check_conjectures: bool) -> ClosedFormTable:
    if verify:
        _raise_on_mismatch(table)
    elif check_conjectures:
        boundary_conjectures_hold(table.params.N, Fraction(table.params.a), table.j)
    return table


@lru_cache(maxsize=None)
def boundary_conjectures_hold(N: int, a: Fraction, j: int) -> bool:
    """
    Compares the boundary elements of P_j with the exact solver at the exact
    coupling ``a``. Successful cells are cached.

    :param N: The dimension.
    :type N: int
    :param a: The coupling as an exact fraction (floats convert exactly).
    :type a: Fraction
    :param j: The degree 2 or 3.
    :type j: int

    :return: True.
    :rtype: bool

    :raises ConjectureViolationError: If a boundary element differs from the solver.
    """
    params = ModelParams(N, a)
    table = _BUILDERS[j](params, check_conjectures=False)
    oracle = solve_band_pseudometrics(build_laguerre_hamiltonian(params), j, params)[j]
    for m, mm in table.exceptional_positions():
        closed, solved = table.matrix.theta(m, mm), oracle.theta(m, mm)
        if closed != solved:
            raise ConjectureViolationError(
                f"{table.provenance[(m, mm)].value} fails for P_{j} at N={N}, a={a}: "
                f"element ({m},{mm}) is {closed}, the solver gives {solved}"
            )
    log.debug("boundary elements of P_%d hold at N=%d, a=%s", j, N, a)
    return True


def closed_form(params: ModelParams, j: int, check_conjectures: bool = True) -> ClosedFormTable:
    """ Dispatches to p0..p3; the boundary elements of p2 and p3 are checked unless disabled. """
    if not 0 <= j <= MAX_CLOSED_DEGREE:
        raise DimensionError(f"closed forms exist for degrees 0..{MAX_CLOSED_DEGREE}, got {j}")
    if j < 2:
        return _BUILDERS[j](params)
    return _BUILDERS[j](params, check_conjectures=check_conjectures)


def _close(left, right, exact: bool, scale: float = 0.0) -> bool:
    if exact:
        return left == right
    return abs(left - right) <= 1e-9 * max(abs(left), abs(right), scale, 1e-300)


def verify_closed_form(params: ModelParams, j: int) -> list:
    """
    Compares the closed-form P_j with the exact solver element by element.

    :param params: The model parameters.
    :type params: ModelParams
    :param j: The degree 0..3.
    :type j: int

    :return: Mismatches as (position, closed value, solver value, provenance).
    :rtype: list[tuple]
    """
    table = closed_form(params, j, check_conjectures=False)
    return _mismatches(table)


def _mismatches(table: ClosedFormTable) -> list:
    params = table.params
    oracle = solve_band_pseudometrics(build_laguerre_hamiltonian(params), table.j, params)[table.j]
    exact = params.backend == Backend.RATIONAL
    scale = 0.0 if exact else float(table.matrix.max_abs())
    mismatches = []
    for (m, mm), origin in sorted(table.provenance.items()):
        closed, solved = table.matrix.theta(m, mm), oracle.theta(m, mm)
        if not _close(closed, solved, exact, scale):
            mismatches.append(((m, mm), closed, solved, origin))
    return mismatches


def _raise_on_mismatch(table: ClosedFormTable) -> None:
    mismatches = _mismatches(table)
    if mismatches:
        (m, mm), closed, solved, origin = mismatches[0]
        raise ConjectureViolationError(
            f"P_{table.j} element ({m},{mm}) [{origin.value}] at N={table.params.N}: "
            f"closed form {closed} != solver {solved}"
        )
    log.debug("P_%d at N=%d matches the solver", table.j, table.params.N)


def closed_form_tables(params: ModelParams, k: int) -> list:
    """
    P_0..P_k from the closed forms, boundary elements checked.

    :param params: The model parameters.
    :type params: ModelParams
    :param k: The largest degree, 0..3.
    :type k: int

    :return: The tables.
    :rtype: list[ClosedFormTable]

    :raises DimensionError: If k is outside 0..3.
    :raises ConjectureViolationError: If a boundary element differs from the solver.
    """
    if not 0 <= k <= MAX_CLOSED_DEGREE:
        raise DimensionError(f"closed forms cover k <= {MAX_CLOSED_DEGREE}; use the solver for k = {k}")
    return [closed_form(params, j) for j in range(k + 1)]


def assemble_metric(params: ModelParams, k: int, alphas=()) -> MetricFamily:
    """
    Theta = P_0 + sum_{j=1}^{k} alpha_j P_j from the closed forms.
    For k = 0 the coefficients are ignored.

    :param params: The model parameters.
    :type params: ModelParams
    :param k: The band half-width, 0..3.
    :type k: int
    :param alphas: alpha_1..alpha_k.
    :type alphas: Sequence

    :return: The metric family member, positivity unknown.
    :rtype: MetricFamily

    :raises ConjectureViolationError: If a boundary element differs from the solver.
    """
    tables = closed_form_tables(params, k)
    alphas = tuple(alphas) if k else ()
    if len(alphas) != k:
        raise DimensionError(f"{k} coefficients expected, got {len(alphas)}")
    theta = tables[0].matrix.widen(k)
    for alpha, table in zip(alphas, tables[1:]):
        theta = theta + table.matrix.scale(alpha)
    return MetricFamily(params, k, alphas, theta)
