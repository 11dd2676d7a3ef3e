"""Finite models of Weyl groups acting on doubles of boundaries.

Type-A flag buildings over prime fields, the subgroup/quotient Galois
correspondence for a group acting on pairs, and homomorphism searches
between small Coxeter groups.
"""

from weylcorr.errors import (
    DomainError,
    InvariantError,
    ParseError,
    PreconditionError,
    SizeError,
    StructuralError,
    UnsupportedError,
    WeylCorrError,
)

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "InvariantError",
    "ParseError",
    "PreconditionError",
    "SizeError",
    "StructuralError",
    "UnsupportedError",
    "WeylCorrError",
]
