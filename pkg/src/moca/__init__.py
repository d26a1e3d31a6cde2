"""Exact monoid algebras, cellular automata over monoid universes, and
finiteness probes, over small exact coefficient fields."""

from .fields import field_make, rationals, parse_field_spec
from .monoids import (
    bicyclic,
    cyclic,
    free_commutative,
    table_monoid,
    parse_monoid_spec,
    product_set,
    enumerate_monoids,
)

__all__ = [
    "field_make",
    "rationals",
    "parse_field_spec",
    "bicyclic",
    "cyclic",
    "free_commutative",
    "table_monoid",
    "parse_monoid_spec",
    "product_set",
    "enumerate_monoids",
]
