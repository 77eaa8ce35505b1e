from dataclasses import dataclass, replace

import numpy as np

from classes.banded_matrix import BandedSymmetricMatrix
from classes.hamiltonian import ModelParams
from definitions.states import Positivity


@dataclass(frozen=True, eq=False)
class MetricFamily:
    """
    An assembled metric Theta = P_0 + sum_j alpha_j P_j together with its
    parameters and positivity status.

    :param params: The model parameters.
    :type params: ModelParams
    :param k: The band half-width.
    :type k: int
    :param alphas: The coefficients alpha_1..alpha_k.
    :type alphas: tuple
    :param theta: The metric candidate.
    :type theta: BandedSymmetricMatrix
    :param positivity: The positivity status.
    :type positivity: Positivity
    :param witness: Triangular factor when positive definite, a direction v with v^T Theta v <= 0 otherwise.
    :type witness: np.ndarray | None
    """
    params: ModelParams
    k: int
    alphas: tuple
    theta: BandedSymmetricMatrix
    positivity: Positivity = Positivity.UNKNOWN
    witness: np.ndarray | None = None

    def with_positivity(self, positivity: Positivity, witness: np.ndarray | None) -> "MetricFamily":
        return replace(self, positivity=positivity, witness=witness)


@dataclass(frozen=True, eq=False)
class PositivityVerdict:
    """
    Outcome of a positivity test.

    :param positivity: Positive definite or indefinite.
    :type positivity: Positivity
    :param witness: The Cholesky factor, or a direction v with v^T Theta v <= 0.
    :type witness: np.ndarray
    :param pivot: The 0-based index of the first non-positive pivot, None when positive definite.
    :type pivot: int | None
    :param pivots: The pivots computed before the test stopped.
    :type pivots: tuple
    """
    positivity: Positivity
    witness: np.ndarray
    pivot: int | None = None
    pivots: tuple = ()
