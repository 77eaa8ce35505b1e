"""
Containers for families of pseudometrics.
"""

from dataclasses import dataclass, field

from classes.banded_matrix import BandedSymmetricMatrix
from classes.hamiltonian import ModelParams, TridiagonalHamiltonian
from definitions.states import Provenance


@dataclass(frozen=True)
class PseudometricSet:
    """
    The normalized pseudometrics P_0..P_k of a tridiagonal Hamiltonian.
    Each P_j solves H^T P_j = P_j H, has band half-width j and first row
    e_{j+1}.

    :param hamiltonian: The Hamiltonian the set was solved for.
    :type hamiltonian: TridiagonalHamiltonian
    :param k: The largest degree.
    :type k: int
    :param matrices: P_0..P_k.
    :type matrices: tuple[BandedSymmetricMatrix]
    :param params: The model parameters when the Hamiltonian is the Laguerre one.
    :type params: ModelParams | None
    """
    hamiltonian: TridiagonalHamiltonian
    k: int
    matrices: tuple
    params: ModelParams | None = None

    def __getitem__(self, j: int) -> BandedSymmetricMatrix:
        return self.matrices[j]

    def __len__(self) -> int:
        return len(self.matrices)


@dataclass(frozen=True)
class ClosedFormTable:
    """
    A pseudometric P_j evaluated from closed formulas, with the provenance of
    every stored element keyed by its 1-based position (m, m + d).

    :param params: The model parameters.
    :type params: ModelParams
    :param j: The degree 0..3.
    :type j: int
    :param matrix: The pseudometric.
    :type matrix: BandedSymmetricMatrix
    :param provenance: Provenance per element.
    :type provenance: dict[tuple[int, int], Provenance]
    """
    params: ModelParams
    j: int
    matrix: BandedSymmetricMatrix
    provenance: dict = field(default_factory=dict, compare=False)

    def exceptional_positions(self) -> list:
        return sorted(position for position, origin in self.provenance.items() if origin.is_exceptional())

    def provenance_bands(self) -> list:
        """ Provenance labels laid out like ``matrix.bands``: entry i of band d labels element (i+1, i+1+d). """
        n = self.params.N
        return [[self.provenance[(m, m + d)].value for m in range(1, n - d + 1)] for d in range(self.j + 1)]
