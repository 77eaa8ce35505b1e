"""
Scalar backends.
Every matrix type is generic over two scalar kinds: exact rationals
(fractions.Fraction) and double-precision floats. This module converts,
parses and formats scalars of both kinds.
"""

from fractions import Fraction
from numbers import Rational

from definitions.errors import ConfigError
from definitions.global_constants import Backend, SIGNIFICANT_DIGITS

Scalar = Fraction | float


def is_exact(value) -> bool:
    """
    Tells whether a scalar belongs to the exact backend.

    :param value: The scalar to inspect.
    :type value: Fraction | int | float

    :return: True for integers and fractions, False for floats.
    :rtype: bool
    """
    return isinstance(value, Rational)


def backend_of(value) -> Backend:
    return Backend.RATIONAL if is_exact(value) else Backend.FLOAT


def to_backend(value, backend: Backend) -> Scalar:
    """
    Converts a scalar to the requested backend.
    Converting a float to the rational backend is exact (binary expansion).

    :param value: The scalar to convert.
    :type value: Fraction | int | float
    :param backend: The target backend.
    :type backend: Backend

    :return: The converted scalar.
    :rtype: Fraction | float
    """
    if backend == Backend.RATIONAL:
        return Fraction(value)
    return float(value)


def parse_scalar(text: str, backend: Backend) -> Scalar:
    """
    Parses a decimal or "p/q" string into a scalar of the given backend.
    Decimal strings such as "2.5" or "1e-3" are exact rationals.

    :param text: The text to parse.
    :type text: str
    :param backend: The target backend.
    :type backend: Backend

    :return: The parsed scalar.
    :rtype: Fraction | float

    :raises ConfigError: If the text is not a finite number.
    """
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as error:
        if backend == Backend.RATIONAL:
            raise ConfigError(f"'{text}' is not an exact fraction") from error
        try:
            value = float(text)
        except ValueError:
            raise ConfigError(f"'{text}' is not a number") from error
        if value != value or value in (float("inf"), float("-inf")):
            raise ConfigError(f"'{text}' is not finite") from error
        return value
    return to_backend(value, backend)


def format_exact(value) -> str:
    """ Canonical reduced "p/q" (or "p") form of an exact scalar. """
    return str(Fraction(value))


def format_scalar(value) -> str:
    """
    Serializes a scalar for JSON output.
    Exact scalars become "p/q" strings, floats use the round-trip repr.

    :param value: The scalar to serialize.
    :type value: Fraction | int | float

    :return: The serialized scalar.
    :rtype: str
    """
    if is_exact(value):
        return format_exact(value)
    return repr(float(value))


def format_significant(value, digits: int = SIGNIFICANT_DIGITS) -> str:
    """ Fixed-width decimal rendering used by the tables. """
    return f"{float(value):.{digits}g}"


def abs_max(values) -> Scalar:
    """ Max-norm of a sequence, exact when the entries are exact. """
    result = 0
    for value in values:
        if abs(value) > result:
            result = abs(value)
    return result
