"""
Published reference values used by the verification ledger and the tests.
"""

# (N, a) -> (E_0, E_1, E_{N-2}, E_{N-1})
REFERENCE_SPECTRA = {
    (6, 1.0): (0.5276681217, 1.796299810, 11.23461043, 17.64596355),
    (6, 2.0): (0.8899410156, 2.433144232, 12.60041387, 19.26204255),
    (6, 3.0): (1.296419203, 3.093998381, 13.94134537, 20.83985455),
    (9, 1.0): (0.3681784529, 1.243357962, 20.38218199, 28.11834338),
    (9, 2.0): (0.6318537723, 1.712163195, 21.90120660, 29.82533613),
    (9, 3.0): (0.9343511232, 2.208578822, 23.39499254, 31.50012806),
}

# Exceptional boundary elements as (j, N, row, col, scale, (c0, c1), m).
# The value is scale * (c0 + c1 * a) / prod_{i=1}^{m} (a + i); rows and columns are 1-based.
REFERENCE_EXCEPTIONAL = (
    (2, 5, 5, 5, 36, (21, 1), 4),
    (2, 9, 9, 9, 141120, (41, 1), 8),
    (3, 4, 4, 4, -16, (7, 1), 3),
    (3, 5, 5, 5, -16, (103, 11), 4),
    (3, 6, 6, 6, -240, (82, 7), 5),
    (3, 7, 7, 7, -960, (239, 17), 6),
    (3, 9, 9, 9, -80640, (431, 23), 8),
    (3, 4, 3, 4, 2, (16, 1), 2),
    (3, 5, 4, 5, 16, (23, 1), 3),
    (3, 6, 5, 6, 120, (30, 1), 4),
    (3, 7, 6, 7, 960, (37, 1), 5),
    (3, 8, 7, 8, 8400, (44, 1), 6),
    (3, 9, 8, 9, 80640, (51, 1), 7),
)
