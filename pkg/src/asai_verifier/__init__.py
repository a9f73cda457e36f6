"""Exact and numerical verification of quadratic-field exponential-sum identities."""

from .quadfield import FieldContext, QuadInt, make_field, residue_ring

__all__ = ["FieldContext", "QuadInt", "make_field", "residue_ring"]
__version__ = "0.1.0"
