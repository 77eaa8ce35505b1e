"""
The Laguerre lattice Hamiltonian and general tridiagonal Hamiltonians.

Indexing: formulas in docstrings are 1-based (site n = 1..N); storage is
0-based, so ``diag[n - 1]`` holds a_n, ``sup[n - 1]`` holds c_n = H[n, n+1]
and ``sub[n - 1]`` holds b_{n+1} = H[n+1, n].
"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np

from definitions.errors import DimensionError, DomainError
from definitions.global_constants import Backend
from utils.scalars import Scalar, backend_of, format_scalar, is_exact, to_backend


@dataclass(frozen=True)
class ModelParams:
    """
    Input of the model: the matrix dimension and the coupling.
    Integer couplings are promoted to exact fractions.

    :param N: The dimension of the truncated Hamiltonian.
    :type N: int
    :param a: The coupling; any value except the denominator poles -1, ..., -(N-1).
    :type a: Fraction | float

    :raises DimensionError: If N < 1.
    :raises DomainError: If a is a denominator pole.
    """
    N: int
    a: Scalar

    def __post_init__(self) -> None:
        """ Validates the parameters and normalizes the coupling. """
        if isinstance(self.N, bool) or not isinstance(self.N, int) or self.N < 1:
            raise DimensionError(f"dimension N must be a positive integer, got {self.N!r}")
        if is_exact(self.a):
            object.__setattr__(self, "a", Fraction(self.a))
        else:
            object.__setattr__(self, "a", float(self.a))
        for i in range(1, self.N):
            if self.a + i == 0:
                raise DomainError(f"a = {self.a} makes the factor (a + {i}) vanish")

    @property
    def backend(self) -> Backend:
        return backend_of(self.a)


@dataclass(frozen=True)
class TridiagonalHamiltonian:
    """
    A general three-band matrix, the one-dimensional nearest-neighbour lattice.

    :param diag: Diagonal a_1..a_N.
    :type diag: tuple
    :param sup: Super-diagonal c_1..c_{N-1}.
    :type sup: tuple
    :param sub: Sub-diagonal b_2..b_N.
    :type sub: tuple
    """
    diag: tuple
    sup: tuple
    sub: tuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "diag", tuple(self.diag))
        object.__setattr__(self, "sup", tuple(self.sup))
        object.__setattr__(self, "sub", tuple(self.sub))
        if not self.diag:
            raise DimensionError("a Hamiltonian needs at least one site")
        if len(self.sup) != self.n - 1 or len(self.sub) != self.n - 1:
            raise DimensionError(
                f"off-diagonal bands must have {self.n - 1} entries, "
                f"got {len(self.sup)} and {len(self.sub)}"
            )
        if any(isinstance(value, complex) for value in self.diag):
            raise DomainError("diagonal entries must be real")

    @property
    def n(self) -> int:
        return len(self.diag)

    def entry(self, row: int, col: int) -> Scalar:
        """
        Returns the 0-based entry H[row, col], zero outside the three bands.

        :param row: 0-based row.
        :type row: int
        :param col: 0-based column.
        :type col: int

        :return: The entry.
        :rtype: Fraction | float
        """
        if not (0 <= row < self.n and 0 <= col < self.n):
            return 0
        if row == col:
            return self.diag[row]
        if col == row + 1:
            return self.sup[row]
        if row == col + 1:
            return self.sub[col]
        return 0

    def is_symmetric(self) -> bool:
        return self.sup == self.sub

    def to_dense(self, dtype=float) -> np.ndarray:
        """
        Dense copy. Use ``dtype=object`` to keep exact fractions.

        :param dtype: The numpy dtype of the result.
        :type dtype: type

        :return: The N x N matrix.
        :rtype: np.ndarray
        """
        if dtype is object:
            matrix = np.full((self.n, self.n), Fraction(0), dtype=object)
        else:
            matrix = np.zeros((self.n, self.n), dtype=dtype)
        for i in range(self.n):
            matrix[i, i] = self.diag[i]
            if i + 1 < self.n:
                matrix[i, i + 1] = self.sup[i]
                matrix[i + 1, i] = self.sub[i]
        return matrix

    def max_abs(self) -> Scalar:
        return max(abs(value) for value in self.diag + self.sup + self.sub)


def build_laguerre_hamiltonian(params: ModelParams) -> TridiagonalHamiltonian:
    """
    Builds the truncated Laguerre Hamiltonian.
    Row n (1-based) reads (-(a+n-1), a+2n-1, -n); e.g. for N = 3
    [[a+1, -1, 0], [-a-1, a+3, -2], [0, -a-2, a+5]].

    :param params: The model parameters.
    :type params: ModelParams

    :return: The N x N tridiagonal Hamiltonian in the backend of ``params.a``.
    :rtype: TridiagonalHamiltonian
    """
    a = params.a
    backend = params.backend
    diag = [a + to_backend(2 * n - 1, backend) for n in range(1, params.N + 1)]
    sup = [to_backend(-n, backend) for n in range(1, params.N)]
    sub = [-(a + to_backend(n, backend)) for n in range(1, params.N)]
    return TridiagonalHamiltonian(diag, sup, sub)


def conjugate_transpose(hamiltonian: TridiagonalHamiltonian) -> TridiagonalHamiltonian:
    """ Swaps the off-diagonal bands; entries are real, so this is H^T. """
    return TridiagonalHamiltonian(hamiltonian.diag, hamiltonian.sub, hamiltonian.sup)


def apply(hamiltonian: TridiagonalHamiltonian, vector) -> list:
    """
    Matrix-vector product in O(N).

    :param hamiltonian: The Hamiltonian.
    :type hamiltonian: TridiagonalHamiltonian
    :param vector: A sequence of N scalars.
    :type vector: Sequence

    :return: The product H v.
    :rtype: list

    :raises DimensionError: If the vector length differs from N.
    """
    n = hamiltonian.n
    if len(vector) != n:
        raise DimensionError(f"vector of length {len(vector)} applied to a {n}x{n} Hamiltonian")
    result = []
    for i in range(n):
        value = hamiltonian.diag[i] * vector[i]
        if i > 0:
            value += hamiltonian.sub[i - 1] * vector[i - 1]
        if i + 1 < n:
            value += hamiltonian.sup[i] * vector[i + 1]
        result.append(value)
    return result


def characteristic_value(hamiltonian: TridiagonalHamiltonian, z: Scalar) -> Scalar:
    """
    Evaluates det(zI - H) with the continuant recurrence
    f_n = (z - a_n) f_{n-1} - b_n c_{n-1} f_{n-2}.
    For the Laguerre Hamiltonian this equals (-1)^N N! L(N, a, z).

    :param hamiltonian: The Hamiltonian.
    :type hamiltonian: TridiagonalHamiltonian
    :param z: The spectral variable.
    :type z: Fraction | float

    :return: The determinant.
    :rtype: Fraction | float
    """
    previous, current = 1, z - hamiltonian.diag[0]
    for i in range(1, hamiltonian.n):
        coupling = hamiltonian.sub[i - 1] * hamiltonian.sup[i - 1]
        previous, current = current, (z - hamiltonian.diag[i]) * current - coupling * previous
    return current


def laguerre_secular_scale(N: int) -> int:
    """ The factor relating det(zI - H) to L(N, a, z). """
    return (-1) ** N * factorial(N)


def hamiltonian_to_dict(hamiltonian: TridiagonalHamiltonian) -> dict:
    """ JSON form {"n", "diag", "super", "sub"} with exact scalars as "p/q". """
    return {
        "n": hamiltonian.n,
        "diag": [format_scalar(value) for value in hamiltonian.diag],
        "super": [format_scalar(value) for value in hamiltonian.sup],
        "sub": [format_scalar(value) for value in hamiltonian.sub],
    }
