"""
Results of the physical layer: Dyson maps, position operators and trajectories.
"""

import numpy as np

from definitions.states import DysonVariant


class DysonMap:
    """
    A factor of the metric, Theta = Omega^T Omega.

    :param omega: The N x N real map.
    :type omega: np.ndarray
    :param variant: Exact symmetric root or first-order expansion.
    :type variant: DysonVariant
    """
    omega: np.ndarray
    variant: DysonVariant

    def __init__(self, omega: np.ndarray, variant: DysonVariant) -> None:
        """ Constructor for the DysonMap class. """
        self.omega = np.asarray(omega, dtype=float)
        self.variant = variant

    @property
    def n(self) -> int:
        return self.omega.shape[0]

    def metric(self) -> np.ndarray:
        """ The metric Omega^T Omega this map factorizes (approximately for the first-order variant). """
        return self.omega.T @ self.omega


class PositionModel:
    """
    The smeared position operator Q = Omega^{-1} q Omega.

    :param sites: Site coordinates q_1 < ... < q_N.
    :type sites: np.ndarray
    :param q_hat: diag(sites).
    :type q_hat: np.ndarray
    :param Q: The position operator in the original representation.
    :type Q: np.ndarray
    :param chi: Column s is the eigenvector chi_s = Omega^{-1} e_s of Q for q_s, Theta-normalized.
    :type chi: np.ndarray
    :param tridiagonal_defect: Frobenius mass of Q outside the three central bands.
    :type tridiagonal_defect: float
    """
    sites: np.ndarray
    q_hat: np.ndarray
    Q: np.ndarray
    chi: np.ndarray
    tridiagonal_defect: float

    def __init__(self, sites: np.ndarray, q_hat: np.ndarray, Q: np.ndarray, chi: np.ndarray,
                 tridiagonal_defect: float) -> None:
        """ Constructor for the PositionModel class. """
        self.sites = sites
        self.q_hat = q_hat
        self.Q = Q
        self.chi = chi
        self.tridiagonal_defect = tridiagonal_defect


class EvolutionResult:
    """
    A trajectory on a time grid; row i of every array belongs to ``times[i]``.
    """
    times: np.ndarray
    site_probabilities: np.ndarray
    wavefunctions: np.ndarray
    smeared: np.ndarray

    def __init__(self, times: np.ndarray, site_probabilities: np.ndarray, wavefunctions: np.ndarray,
                 smeared: np.ndarray) -> None:
        """
        Constructor for the EvolutionResult class.

        :param times: The time grid.
        :type times: np.ndarray
        :param site_probabilities: rho(t, s), each row summing to one.
        :type site_probabilities: np.ndarray
        :param wavefunctions: psi(t) in the original representation.
        :type wavefunctions: np.ndarray
        :param smeared: (Theta psi(t))_s, the wavefunction seen through the metric.
        :type smeared: np.ndarray
        """
        self.times = times
        self.site_probabilities = site_probabilities
        self.wavefunctions = wavefunctions
        self.smeared = smeared
