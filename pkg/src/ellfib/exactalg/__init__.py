"""Exact coefficient fields and homogeneous bivariate polynomial algebra."""

from ellfib.exactalg.fields import QQ, FieldElem, FieldSpec, field_invert
from ellfib.exactalg.homog import (
    INFINITE,
    HomogPoly,
    SquarefreeCluster,
    content_normalize,
    hp_gcd,
    order_split,
    squarefree_decompose,
    squarefree_part,
    vanishing_order,
)
from ellfib.exactalg.parser import parse_field, parse_homog, parse_point, parse_univariate

__all__ = [
    "INFINITE",
    "QQ",
    "FieldElem",
    "FieldSpec",
    "HomogPoly",
    "SquarefreeCluster",
    "content_normalize",
    "field_invert",
    "hp_gcd",
    "order_split",
    "parse_field",
    "parse_homog",
    "parse_point",
    "parse_univariate",
    "squarefree_decompose",
    "squarefree_part",
    "vanishing_order",
]
