"""
Exception hierarchy of the library.
Domain errors also derive from ValueError or ArithmeticError so that callers
catching the builtin classes keep working.
"""


class CryptohermError(Exception):
    """ Base class of every error raised by this package. """


class DimensionError(CryptohermError, ValueError):
    """ Raised on an invalid dimension or a length mismatch. """


class DomainError(CryptohermError, ValueError):
    """ Raised when an input lies outside the domain of an operation. """


class NumericError(CryptohermError, ArithmeticError):
    """ Raised when a floating-point procedure fails to converge. """


class DegeneracyError(NumericError):
    """ Raised when two energies coincide within tolerance. """


class StructureError(CryptohermError):
    """ Raised when the band nullspace does not have dimension k+1. """


class NormalizationError(CryptohermError):
    """ Raised when a nullspace basis cannot be brought to normal form. """


class ConjectureViolationError(CryptohermError):
    """ Raised when a boundary closed form disagrees with the exact solver. """


class ConfigError(CryptohermError, ValueError):
    """ Raised on invalid command-line configuration. """
