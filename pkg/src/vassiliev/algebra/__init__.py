"""Exact diagram algebra: vectors, relations, quotients and products."""

from .elimination import Echelon, eliminate
from .products import (
    chord_on_interval,
    insert_into,
    product,
    series_exp,
    series_product,
    sharp_action,
    to_circle,
)
from .quotient import QuotientPresentation, quotient, quotient_dim, stu_reduce
from .relations import (
    RELATION_KINDS,
    generators,
    has_isolated_chord,
    parse_kinds,
    relation_vectors,
    stu_terms,
)
from .vectors import AlgebraError, DiagramVector, ZSeries

__all__ = [
    "AlgebraError",
    "DiagramVector",
    "ZSeries",
    "Echelon",
    "eliminate",
    "QuotientPresentation",
    "quotient",
    "quotient_dim",
    "stu_reduce",
    "RELATION_KINDS",
    "generators",
    "has_isolated_chord",
    "parse_kinds",
    "relation_vectors",
    "stu_terms",
    "product",
    "series_product",
    "series_exp",
    "to_circle",
    "insert_into",
    "sharp_action",
    "chord_on_interval",
]
