"""
This module defines the states attached to metrics, matrix elements and Dyson maps.
"""

from enum import Enum


class Positivity(Enum):
    """ Enum representing the positivity status of a metric candidate. """
    POSITIVE_DEFINITE = "positive-definite"
    INDEFINITE = "indefinite"
    UNKNOWN = "unknown"

    def is_positive_definite(self):
        return self == Positivity.POSITIVE_DEFINITE

    def is_indefinite(self):
        return self == Positivity.INDEFINITE

    def is_unknown(self):
        return self == Positivity.UNKNOWN


class Provenance(Enum):
    """ Enum recording which closed formula a matrix element comes from. """
    LEMMA1 = "lemma1"
    LEMMA2 = "lemma2"
    LEMMA2_CORRECTED = "lemma2-corrected"
    LEMMA3 = "lemma3"
    LEMMA4 = "lemma4"
    LEMMA4_CORRECTED = "lemma4-corrected"
    CONJECTURE1 = "conjecture1"
    CONJECTURE2 = "conjecture2"
    CONJECTURE3 = "conjecture3"

    def is_exceptional(self):
        return self in (Provenance.CONJECTURE1, Provenance.CONJECTURE2, Provenance.CONJECTURE3)


class DysonVariant(Enum):
    """ Enum naming how a Dyson map was obtained. """
    SYMMETRIC_SQRT = "symmetric-sqrt"
    FIRST_ORDER = "first-order"

    def is_exact(self):
        return self == DysonVariant.SYMMETRIC_SQRT
