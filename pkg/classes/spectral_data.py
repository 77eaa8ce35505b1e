from dataclasses import dataclass

import numpy as np

from classes.hamiltonian import ModelParams


@dataclass(frozen=True, eq=False)
class SpectralData:
    """
    Spectrum and biorthogonal eigenbasis of the Laguerre Hamiltonian.

    :param params: The model parameters.
    :type params: ModelParams
    :param energies: E_0 < ... < E_{N-1}.
    :type energies: np.ndarray
    :param right_vectors: Column n is psi_n = (L(0,a,E_n), ..., L(N-1,a,E_n)), possibly rescaled.
    :type right_vectors: np.ndarray
    :param left_vectors: Column n is xi_n, solving H^T xi_n = E_n xi_n.
    :type left_vectors: np.ndarray
    :param pairings: t_n = <xi_n|psi_n> > 0.
    :type pairings: np.ndarray
    """
    params: ModelParams
    energies: np.ndarray
    right_vectors: np.ndarray
    left_vectors: np.ndarray
    pairings: np.ndarray

    @property
    def size(self) -> int:
        return len(self.energies)
