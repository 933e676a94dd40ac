"""Bases of the real cyclotomic units built from the Gold-Kim basis.

A real generator |x| or |x_1||x| is kept as its constituent symbols; modulo
roots of unity |x| and x agree for elements of Z E+, and |u||v| agrees with
uv, so the Gold-Kim image is the sum of the parts' decompositions.
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath

from .galois_core import FieldSpec
from .goldkim import GKIndex, basis_symbol, gold_kim, is_gk_index
from .lattice import DEFAULT_PREC, MAX_PREC, PrecisionError, symbol_value, unit_root_order
from .symbols import UnitSymbol, add_term, canonicalize_atom, is_unit, mul

DEAD_ZONE = (1e-6, 1e-2)


@dataclass(frozen=True)
class RealGenerator:
    kind: int  # 0, 1 or 2
    label: GKIndex
    parts: tuple
    gk_image: tuple  # sorted (GKIndex, coeff) pairs

    def image(self) -> dict:
        return dict(self.gk_image)

    def symbol(self) -> UnitSymbol:
        out = self.parts[0]
        for p in self.parts[1:]:
            out = mul(out, p)
        return out


def hasse_order(x: UnitSymbol, prec: int = DEFAULT_PREC) -> int:
    """1 if x lies in Z E+ (mod roots of unity), else 2."""
    if not is_unit(x):
        raise ValueError("hasse_order needs a unit")
    m = unit_root_order(x.spec.n)
    while True:
        with mpmath.workprec(prec):
            u = symbol_value(x, 1, prec)
            z = u / abs(u)
            dev = float(abs(z ** m - 1))
        if dev < DEAD_ZONE[0]:
            return 1
        if dev > DEAD_ZONE[1]:
            return 2
        if prec >= MAX_PREC:
            raise PrecisionError(f"|z^{m} - 1| = {dev:.3g} inside the undecided band")
        prec *= 2


def _two_position(spec: FieldSpec):
    for j, P in enumerate(spec.primes):
        if P.p == 2:
            return j
    return None


def gk_type(spec: FieldSpec, b) -> int:
    """Type of a Gold-Kim element: 0 for xi, 1 if its real part generates (order 1), 2 otherwise."""
    om = b[0]
    if len(om) == 1:
        return 0
    two = _two_position(spec)
    if two is None:
        return 2
    return 2 if two in om else 1


def literal_multiplier(spec: FieldSpec) -> UnitSymbol:
    """1 - zeta_n^(sigma_1) at the full level."""
    om = tuple(range(spec.r))
    return UnitSymbol(spec, {canonicalize_atom(spec, om, (1,) + (0,) * (spec.r - 1)): 1}, canonical=True)


def projection_index(spec: FieldSpec, mult: UnitSymbol) -> int:
    """|1 + sum of mult's coordinates on type-2 elements|; the family is a basis iff this is 2."""
    v = gold_kim(spec).decompose(mult)
    return abs(1 + sum(c for b, c in v.items() if gk_type(spec, b) == 2))


def choose_multiplier(spec: FieldSpec, mode: str = "auto") -> UnitSymbol | None:
    G = gold_kim(spec)
    order2 = [b for b in G.basis if gk_type(spec, b) == 2]
    if not order2:
        return None
    if mode == "literal":
        return literal_multiplier(spec)
    if mode == "auto":
        m = literal_multiplier(spec)
        if projection_index(spec, m) == 2:
            return m
    elif mode != "gk":
        raise ValueError(f"unknown multiplier mode {mode!r}")
    return basis_symbol(spec, order2[0])


def _image(parts, spec) -> tuple:
    G = gold_kim(spec)
    d = {}
    for p in parts:
        for b, c in G.decompose(p).items():
            add_term(d, b, c)
    return tuple(sorted(d.items()))


def real_basis(spec: FieldSpec, multiplier: str = "auto") -> list[RealGenerator]:
    """Type 0: |xi|; type 1: |x| for order-1 x; type 2: |x_1||x| for order-2 x.

    The multiplier x_1 is 1 - zeta_n^(sigma_1) whenever that yields a basis
    ("auto"), otherwise the first order-2 Gold-Kim element.
    """
    G = gold_kim(spec)
    m = choose_multiplier(spec, multiplier)
    out = []
    for b in G.basis:
        t = gk_type(spec, b)
        x = basis_symbol(spec, b)
        parts = (x,) if t < 2 else (m, x)
        out.append(RealGenerator(t, b, parts, _image(parts, spec)))
    return out


def project_to_gk(g: RealGenerator) -> dict:
    return g.image()


def expected_real_divisors(spec: FieldSpec) -> tuple:
    k = spec.phi // 2 - 1
    if spec.r == 1:
        return (1,) * k
    return (1,) * (k - 1) + (2,)


def multiplier_is_gk(spec: FieldSpec) -> bool:
    om = tuple(range(spec.r))
    return is_gk_index(spec, (om, (1,) + (0,) * (spec.r - 1)))
