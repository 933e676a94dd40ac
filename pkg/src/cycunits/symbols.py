"""Cyclotomic unit symbols modulo roots of unity.

An atom (omega, a) stands for 1 - zeta_m^u where m = n_omega is the product of
the prime powers at positions omega and u is the residue whose per-prime
indices are a.  Positions are 0-based internally and 1-based in text.
"""
from __future__ import annotations

import re
from typing import NamedTuple

from .galois_core import FieldSpec, GaloisElement, GroupRingElement, SpecMismatch


class Atom(NamedTuple):
    omega: tuple
    idx: tuple


def canonicalize_atom(spec: FieldSpec, omega, idx) -> Atom:
    """Pick the representative of {a, Ja} whose last coordinate is below phi/2.

    1 - z and 1 - z^-1 differ by a root of unity, so both tuples name the same
    class; the rule is the reverse-lex minimum of the pair.
    """
    omega = tuple(omega)
    if not omega:
        raise ValueError("empty level")
    if len(idx) != len(omega):
        raise ValueError("index tuple length does not match the level")
    if list(omega) != sorted(set(omega)) or omega[-1] >= spec.r:
        raise ValueError(f"bad level {omega}")
    P = spec.primes
    idx = tuple(a % P[i].phi for i, a in zip(omega, idx))
    if idx[-1] >= P[omega[-1]].half:
        idx = tuple((a + P[i].half) % P[i].phi for i, a in zip(omega, idx))
    return Atom(omega, idx)


def _canon_fast(spec, omega, idx):
    # hot path: omega already validated, idx already reduced
    P = spec.primes
    if idx[-1] >= P[omega[-1]].half:
        return Atom(omega, tuple((a + P[i].half) % P[i].phi for i, a in zip(omega, idx)))
    return Atom(omega, idx)


def add_term(d: dict, key, c):
    v = d.get(key, 0) + c
    if v:
        d[key] = v
    else:
        d.pop(key, None)


class UnitSymbol:
    """Sparse exponent map Atom -> int, immutable once built."""

    __slots__ = ("spec", "terms", "_hash")

    def __init__(self, spec: FieldSpec, terms=None, canonical=False):
        self.spec = spec
        d = {}
        for atom, e in (terms or {}).items():
            if not canonical:
                atom = canonicalize_atom(spec, *atom)
            add_term(d, atom, e)
        self.terms = d
        self._hash = None

    @classmethod
    def atom(cls, spec, omega, idx, e=1):
        return cls(spec, {canonicalize_atom(spec, omega, idx): e}, canonical=True)

    def __eq__(self, other):
        return isinstance(other, UnitSymbol) and self.spec == other.spec and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.spec, frozenset(self.terms.items())))
        return self._hash

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __mul__(self, other):
        return mul(self, other)

    def __pow__(self, k):
        return power(self, k)

    def __repr__(self):
        return f"UnitSymbol(n={self.spec.n}, {format_symbol(self)})"


def mul(x: UnitSymbol, y: UnitSymbol) -> UnitSymbol:
    if x.spec != y.spec:
        raise SpecMismatch("symbols over different conductors")
    d = dict(x.terms)
    for a, e in y.terms.items():
        add_term(d, a, e)
    return UnitSymbol(x.spec, d, canonical=True)


def power(x: UnitSymbol, k: int) -> UnitSymbol:
    return UnitSymbol(x.spec, {a: e * k for a, e in x.terms.items()}, canonical=True)


def inverse(x: UnitSymbol) -> UnitSymbol:
    return power(x, -1)


def act_on_atom(spec: FieldSpec, g_idx: tuple, atom: Atom) -> Atom:
    om, a = atom
    return _canon_fast(spec, om, tuple(spec.mul_index(i, g_idx[i], x) for i, x in zip(om, a)))


def galois_act(u, x: UnitSymbol) -> UnitSymbol:
    """Action of a GroupRingElement (or a single GaloisElement) on a symbol."""
    if isinstance(u, GaloisElement):
        u = GroupRingElement.of(u)
    if u.spec != x.spec:
        raise SpecMismatch("group ring element and symbol over different conductors")
    d = {}
    for g_idx, c in u.terms:
        for atom, e in x.terms.items():
            add_term(d, act_on_atom(x.spec, g_idx, atom), c * e)
    return UnitSymbol(x.spec, d, canonical=True)


def frobenius_inverse_index(spec: FieldSpec, p: int, i: int) -> int:
    """Index of p^-1 at coordinate i."""
    q = spec.primes[i].q
    return spec.encode(i, pow(p, -1, q))


def norm_lower(spec: FieldSpec, omega: tuple, idx: tuple, pos: int) -> dict:
    """Lower side of the norm relation at position pos of omega.

    prod_c atom(omega, idx[pos := c]) = (1 - Frob(p)^-1) atom(omega minus pos, rest)
    """
    j = omega[pos]
    p = spec.primes[j].p
    om2 = omega[:pos] + omega[pos + 1:]
    a2 = idx[:pos] + idx[pos + 1:]
    b = tuple(spec.mul_index(i, x, frobenius_inverse_index(spec, p, i)) for i, x in zip(om2, a2))
    out = {}
    add_term(out, _canon_fast(spec, om2, a2), 1)
    add_term(out, _canon_fast(spec, om2, b), -1)
    return out


def norm_relation_expand(atom: Atom, j: int, spec: FieldSpec, strict: bool = True) -> UnitSymbol:
    """Rewrite atom through the norm relation along prime position j.

    Returns lower-level terms minus the other same-level terms of the relation.
    With strict=True the j-coordinate of the atom must be zero.
    """
    om, a = atom
    if len(om) < 2:
        raise ValueError("norm relation needs a level with at least two primes")
    if j not in om:
        raise ValueError(f"prime position {j} not in level {om}")
    pos = om.index(j)
    if strict and a[pos] != 0:
        raise ValueError("coordinate is not zero; pass strict=False to solve for it anyway")
    out = norm_lower(spec, om, a, pos)
    for c in range(spec.primes[j].phi):
        if c == a[pos]:
            continue
        b = list(a)
        b[pos] = c
        add_term(out, _canon_fast(spec, om, tuple(b)), -1)
    return UnitSymbol(spec, out, canonical=True)


def is_unit(x: UnitSymbol) -> bool:
    sums = {}
    for (om, _), e in x.terms.items():
        if len(om) == 1:
            sums[om[0]] = sums.get(om[0], 0) + e
    return all(v == 0 for v in sums.values())


# text form: (1,2;0,1)^1 * (2;1)^-1, positions 1-based

_TERM = re.compile(r"\(\s*([\d\s,]+);([\d\s,\-]+)\)\s*(?:\^\s*(-?\d+))?")


def format_symbol(x: UnitSymbol) -> str:
    if not x.terms:
        return "1"
    parts = []
    for (om, a), e in sorted(x.terms.items(), key=lambda t: (-len(t[0][0]), t[0][0], t[0][1])):
        parts.append(f"({','.join(str(i + 1) for i in om)};{','.join(map(str, a))})^{e}")
    return " * ".join(parts)


def parse_symbol(text: str, spec: FieldSpec) -> UnitSymbol:
    text = text.strip()
    if text in ("", "1"):
        return UnitSymbol(spec)
    d = {}
    for chunk in text.split("*"):
        chunk = chunk.strip()
        m = _TERM.fullmatch(chunk)
        if not m:
            raise ValueError(f"cannot parse term {chunk!r}")
        om = tuple(int(t) - 1 for t in m.group(1).split(","))
        a = tuple(int(t) for t in m.group(2).split(","))
        e = int(m.group(3)) if m.group(3) is not None else 1
        if any(i < 0 for i in om):
            raise ValueError("prime positions are 1-based")
        add_term(d, canonicalize_atom(spec, om, a), e)
    return UnitSymbol(spec, d, canonical=True)
