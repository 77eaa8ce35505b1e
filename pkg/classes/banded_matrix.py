"""
Real symmetric (2k+1)-diagonal matrices.
Only the upper bands are stored: ``bands[d][m]`` holds theta_{m+1, m+1+d}
(1-based), i.e. the 0-based entry (m, m + d).
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from definitions.errors import DimensionError
from utils.scalars import Scalar, abs_max, format_scalar, is_exact


@dataclass(frozen=True)
class BandedSymmetricMatrix:
    """
    A symmetric band matrix holding a metric, a pseudometric or a candidate.

    :param n: The dimension.
    :type n: int
    :param k: The band half-width, 0 <= k <= n-1.
    :type k: int
    :param bands: For d = 0..k a tuple of n-d scalars.
    :type bands: tuple[tuple]

    :raises DimensionError: If k is out of range or a band has the wrong length.
    """
    n: int
    k: int
    bands: tuple

    def __post_init__(self) -> None:
        if self.n < 1 or not (0 <= self.k <= self.n - 1):
            raise DimensionError(f"band half-width {self.k} invalid for dimension {self.n}")
        bands = tuple(tuple(band) for band in self.bands)
        if len(bands) != self.k + 1:
            raise DimensionError(f"expected {self.k + 1} bands, got {len(bands)}")
        for d, band in enumerate(bands):
            if len(band) != self.n - d:
                raise DimensionError(f"band {d} must hold {self.n - d} entries, got {len(band)}")
        object.__setattr__(self, "bands", bands)

    @classmethod
    def zeros(cls, n: int, k: int, zero: Scalar = Fraction(0)) -> "BandedSymmetricMatrix":
        return cls(n, k, [[zero] * (n - d) for d in range(k + 1)])

    @classmethod
    def from_function(cls, n: int, k: int, element: Callable[[int, int], Scalar]) -> "BandedSymmetricMatrix":
        """
        Builds the matrix from a 1-based element rule theta(m, m + d).

        :param n: The dimension.
        :type n: int
        :param k: The band half-width.
        :type k: int
        :param element: Callable returning theta_{m, mm} for 1 <= m <= mm <= n, mm - m <= k.
        :type element: Callable[[int, int], Scalar]

        :return: The band matrix.
        :rtype: BandedSymmetricMatrix
        """
        return cls(n, k, [[element(m, m + d) for m in range(1, n - d + 1)] for d in range(k + 1)])

    @classmethod
    def from_dense(cls, matrix, k: int) -> "BandedSymmetricMatrix":
        """ Reads the upper k bands of a square matrix; symmetry is assumed, not checked. """
        n = len(matrix)
        return cls(n, k, [[matrix[m][m + d] for m in range(n - d)] for d in range(k + 1)])

    def entry(self, row: int, col: int) -> Scalar:
        """
        Returns the 0-based entry, zero outside the band.

        :param row: 0-based row.
        :type row: int
        :param col: 0-based column.
        :type col: int

        :return: The entry.
        :rtype: Fraction | float
        """
        if row > col:
            row, col = col, row
        d = col - row
        if row < 0 or col >= self.n or d > self.k:
            return 0
        return self.bands[d][row]

    def theta(self, m: int, mm: int) -> Scalar:
        """ 1-based element theta_{m, mm}. """
        return self.entry(m - 1, mm - 1)

    def is_exact(self) -> bool:
        return all(is_exact(value) for band in self.bands for value in band)

    def widen(self, k: int) -> "BandedSymmetricMatrix":
        """ Same matrix stored with a larger band half-width. """
        if k < self.k:
            raise DimensionError(f"cannot narrow a {self.k}-band matrix to {k}")
        zero = Fraction(0) if self.is_exact() else 0.0
        extra = [[zero] * (self.n - d) for d in range(self.k + 1, k + 1)]
        return BandedSymmetricMatrix(self.n, k, list(self.bands) + extra)

    def scale(self, factor: Scalar) -> "BandedSymmetricMatrix":
        return BandedSymmetricMatrix(self.n, self.k, [[factor * value for value in band] for band in self.bands])

    def __add__(self, other: "BandedSymmetricMatrix") -> "BandedSymmetricMatrix":
        if self.n != other.n:
            raise DimensionError(f"cannot add matrices of dimension {self.n} and {other.n}")
        k = max(self.k, other.k)
        left, right = self.widen(k), other.widen(k)
        return BandedSymmetricMatrix(
            self.n, k, [[x + y for x, y in zip(p, q)] for p, q in zip(left.bands, right.bands)]
        )

    def to_dense(self, dtype=float) -> np.ndarray:
        """
        Dense symmetric copy. Use ``dtype=object`` to keep exact fractions.

        :param dtype: The numpy dtype of the result.
        :type dtype: type

        :return: The n x n matrix.
        :rtype: np.ndarray
        """
        if dtype is object:
            matrix = np.full((self.n, self.n), Fraction(0), dtype=object)
        else:
            matrix = np.zeros((self.n, self.n), dtype=dtype)
        for d, band in enumerate(self.bands):
            for m, value in enumerate(band):
                matrix[m, m + d] = value
                matrix[m + d, m] = value
        return matrix

    def max_abs(self) -> Scalar:
        return abs_max(value for band in self.bands for value in band)

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "bands": [[format_scalar(value) for value in band] for band in self.bands]}
