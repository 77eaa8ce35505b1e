"""
Definitions of constants and enumerations used across the program.
This module contains the numerical tolerances, the defaults of the
command-line front end and the enumerations naming backends, sources,
output formats and exit codes.
"""

from enum import Enum, IntEnum

# Numerical tolerances
DEGENERACY_TOLERANCE = 1e-12        # relative to E_max - E_min
RESIDUAL_TOLERANCE = 1e-12          # relative to ||H|| * ||Theta|| in the float backend
PIVOT_TOLERANCE = 1e-12             # float elimination only
BOUNDARY_RELATIVE_TOLERANCE = 1e-12
SINGULARITY_TOLERANCE = 1e-14
RECONSTRUCTION_TOLERANCE = 1e-9     # relative Frobenius error of a spectral reconstruction

# Search defaults
DEFAULT_ALPHA_CAP = 1e6
DEFAULT_BISECTION_STEPS = 200

# Evolution defaults
DEFAULT_TMAX = 10.0
DEFAULT_STEPS = 100

# Output formatting
SIGNIFICANT_DIGITS = 10

# Environment variable capping the worker pool of the verification grid
THREADS_ENV_VAR = "CRYPTOHERM_THREADS"

# Default grid of the verification ledger
VERIFY_DEGREES = (0, 1, 2, 3)
VERIFY_MAX_N = 12
VERIFY_ORACLE_MAX_N = 10
VERIFY_COUPLINGS = ("1", "2", "3", "5/2")


class Backend(Enum):
    RATIONAL = "rational"
    FLOAT = "float"


class Source(Enum):
    CLOSED = "closed"
    ORACLE = "oracle"


class OutputFormat(Enum):
    JSON = "json"
    CSV = "csv"


class ExitCode(IntEnum):
    OK = 0
    CONFIG_ERROR = 2
    NUMERIC_FAILURE = 3
    VERIFICATION_FAILURE = 4
