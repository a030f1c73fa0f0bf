"""Combinatorics of Coxeter systems and certificates for dense orbits of
parabolic boundaries."""
from .core import (
    INF,
    CoxeterMatrix,
    CoxeterSystem,
    GenSubset,
    irreducible_components,
    parse_system,
    product_order,
    restrict,
    serialize,
    validate,
)
from .words import Element, enumerate_ball, identity

__all__ = [
    "INF",
    "CoxeterMatrix",
    "CoxeterSystem",
    "Element",
    "GenSubset",
    "enumerate_ball",
    "identity",
    "irreducible_components",
    "parse_system",
    "product_order",
    "restrict",
    "serialize",
    "validate",
]
