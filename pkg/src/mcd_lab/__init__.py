"""Maximal common divisors in Puiseux monoids.

Exact membership, canonical decompositions and MCD computation for
Grams-like and two-prime reciprocal monoids, brute-force oracles over finite
truncations, ACCP failure chains, the staged no-MCD construction and a rank-2
pair without an MCD.
"""

from .errors import (
    DomainError,
    HypothesisViolation,
    InvariantViolation,
    McdLabError,
    SearchOverflow,
    SpecValidationError,
    TruncationExceeded,
    Unknown,
)
from .rational import format_rat, parse_rat
from .spec import MonoidSpec, fingen, grams_classical, load_spec, m_p, rank2_grams, validate

__version__ = "0.1.0"

__all__ = [
    "DomainError", "HypothesisViolation", "InvariantViolation", "McdLabError", "SearchOverflow",
    "SpecValidationError", "TruncationExceeded", "Unknown", "format_rat", "parse_rat",
    "MonoidSpec", "fingen", "grams_classical", "load_spec", "m_p", "rank2_grams", "validate",
]
