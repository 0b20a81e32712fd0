"""Exact colored Jones polynomials of pretzel links.

Two independent evaluation pipelines over exact Laurent arithmetic in
q^(1/2): a fusion state sum over Temperley-Lieb projector expansions, and a
brute-force Kauffman bracket contraction of the cabled diagram. They must
agree to the last coefficient; the degree module extracts and checks the
closed-form growth of the top q-degree, including the cancellation drop on
special congruence classes of the color.
"""

__version__ = "0.1.0"

__all__ = ["qring", "tl", "skein", "pretzel", "degree", "cli"]
