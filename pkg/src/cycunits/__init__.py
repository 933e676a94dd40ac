"""Explicit bases of cyclotomic unit groups, with exact and numeric verification."""

__version__ = "0.1.0"

from .galois_core import (ConductorError, FieldSpec, GaloisElement, GroupRingElement, compose, conjugation,
                          factorize_conductor, frobenius, invert, norm_element, primitive_root)
from .symbols import (Atom, UnitSymbol, canonicalize_atom, format_symbol, galois_act, is_unit, mul,
                      norm_relation_expand, parse_symbol, power)
from .goldkim import GKIndex, decompose, enumerate_basis, gold_kim, reconstruct, tuple_order, xi_symbol

__all__ = [
    "ConductorError", "FieldSpec", "GaloisElement", "GroupRingElement", "compose", "conjugation",
    "factorize_conductor", "frobenius", "invert", "norm_element", "primitive_root",
    "Atom", "UnitSymbol", "canonicalize_atom", "format_symbol", "galois_act", "is_unit", "mul",
    "norm_relation_expand", "parse_symbol", "power",
    "GKIndex", "decompose", "enumerate_basis", "gold_kim", "reconstruct", "tuple_order", "xi_symbol",
]
