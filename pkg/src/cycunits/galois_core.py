"""Arithmetic of (Z/nZ)* in per-prime generator coordinates.

Each prime power q_j = p_j^e_j carries an index a in [0, phi(q_j)).
For odd p the index is the discrete log to the smallest primitive root.
For p = 2 the index is hybrid: a < phi/2 means 5^a, a >= phi/2 means
-5^(a - phi/2).  In both cases a -> a + phi/2 is complex conjugation.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import gcd
from typing import Iterable

import sympy
from sympy.ntheory.modular import crt


class ConductorError(ValueError):
    """Conductor outside the normalized range (n >= 3, n != 2 mod 4)."""


class SpecMismatch(ValueError):
    pass


@dataclass(frozen=True)
class PrimePower:
    p: int
    e: int
    q: int
    phi: int

    @property
    def half(self) -> int:
        return self.phi // 2


def primitive_root(q: int) -> int:
    """Smallest primitive root modulo an odd prime power."""
    fac = sympy.factorint(q)
    if q < 3 or len(fac) != 1 or 2 in fac:
        raise ValueError(f"{q} is not an odd prime power")
    return int(sympy.primitive_root(q, smallest=True))


@dataclass(frozen=True)
class FieldSpec:
    n: int
    primes: tuple[PrimePower, ...]

    @property
    def r(self) -> int:
        return len(self.primes)

    @cached_property
    def phi(self) -> int:
        out = 1
        for P in self.primes:
            out *= P.phi
        return out

    @cached_property
    def _dec(self):
        dec = []
        for P in self.primes:
            if P.p == 2:
                h = P.half
                dec.append(tuple(pow(5, a, P.q) if a < h else (-pow(5, a - h, P.q)) % P.q
                                 for a in range(P.phi)))
            else:
                g = primitive_root(P.q)
                dec.append(tuple(pow(g, a, P.q) for a in range(P.phi)))
        return tuple(dec)

    @cached_property
    def _enc(self):
        return tuple({u: a for a, u in enumerate(d)} for d in self._dec)

    def decode(self, j: int, a: int) -> int:
        return self._dec[j][a % self.primes[j].phi]

    def encode(self, j: int, u: int) -> int:
        try:
            return self._enc[j][u % self.primes[j].q]
        except KeyError:
            raise ValueError(f"{u} is not a unit mod {self.primes[j].q}") from None

    def mul_index(self, j: int, a: int, b: int) -> int:
        q = self.primes[j].q
        return self._enc[j][self._dec[j][a] * self._dec[j][b] % q]

    def flip(self, j: int, a: int) -> int:
        P = self.primes[j]
        return (a + P.half) % P.phi

    def level(self, omega: Iterable[int]) -> int:
        m = 1
        for i in omega:
            m *= self.primes[i].q
        return m

    def residue(self, omega: tuple, idx: tuple) -> tuple[int, int]:
        """(n_Omega, u) with u mod n_Omega matching the decoded coordinates."""
        mods = [self.primes[i].q for i in omega]
        res = [self._dec[i][a] for i, a in zip(omega, idx)]
        if len(mods) == 1:
            return mods[0], res[0]
        u, m = crt(mods, res)
        return int(m), int(u)

    def index_of(self, omega: tuple, u: int) -> tuple:
        return tuple(self.encode(i, u) for i in omega)

    def units(self) -> list[int]:
        return [u for u in range(1, self.n) if gcd(u, self.n) == 1]


def factorize_conductor(n: int, order: Iterable[int] | None = None) -> FieldSpec:
    """Build a FieldSpec; primes ascending unless an explicit order is given."""
    if n <= 2:
        raise ConductorError(f"n = {n}: need n >= 3")
    if n % 4 == 2:
        raise ConductorError(f"n = {n} is 2 mod 4; use n/2 instead (same cyclotomic field)")
    fac = sympy.factorint(n)
    ps = sorted(fac)
    if order is not None:
        order = list(order)
        if sorted(order) != ps:
            raise ValueError(f"order {order} is not a permutation of the primes of {n}")
        ps = order
    primes = tuple(PrimePower(p, fac[p], p ** fac[p], p ** fac[p] - p ** (fac[p] - 1)) for p in ps)
    return FieldSpec(n, primes)


@dataclass(frozen=True)
class GaloisElement:
    spec: FieldSpec
    idx: tuple

    def __post_init__(self):
        if len(self.idx) != self.spec.r:
            raise ValueError("index tuple length does not match the number of primes")
        object.__setattr__(self, "idx", tuple(a % P.phi for a, P in zip(self.idx, self.spec.primes)))

    @classmethod
    def from_residue(cls, spec: FieldSpec, u: int) -> "GaloisElement":
        if gcd(u, spec.n) != 1:
            raise ValueError(f"{u} is not prime to {spec.n}")
        return cls(spec, tuple(spec.encode(j, u) for j in range(spec.r)))

    @classmethod
    def identity(cls, spec: FieldSpec) -> "GaloisElement":
        return cls(spec, (0,) * spec.r)

    @classmethod
    def sigma(cls, spec: FieldSpec, j: int, k: int = 1) -> "GaloisElement":
        """sigma_j^k: index k at coordinate j, identity elsewhere."""
        idx = [0] * spec.r
        idx[j] = k
        return cls(spec, tuple(idx))

    def residue(self) -> int:
        return self.spec.residue(tuple(range(self.spec.r)), self.idx)[1] % self.spec.n

    def restrict(self, omega: tuple) -> tuple:
        return tuple(self.idx[i] for i in omega)

    def __mul__(self, other):
        return compose(self, other)

    def __repr__(self):
        return f"GaloisElement(n={self.spec.n}, idx={self.idx})"


def _check(g: GaloisElement, h: GaloisElement):
    if g.spec != h.spec:
        raise SpecMismatch("elements live over different conductors")


def compose(g: GaloisElement, h: GaloisElement) -> GaloisElement:
    _check(g, h)
    s = g.spec
    return GaloisElement(s, tuple(s.mul_index(j, a, b) for j, (a, b) in enumerate(zip(g.idx, h.idx))))


def invert(g: GaloisElement) -> GaloisElement:
    s = g.spec
    return GaloisElement(s, tuple(s.encode(j, pow(s.decode(j, a), -1, s.primes[j].q))
                                  for j, a in enumerate(g.idx)))


def conjugation(spec: FieldSpec) -> GaloisElement:
    return GaloisElement(spec, tuple(P.half for P in spec.primes))


def frobenius(p: int, d) -> GaloisElement:
    """Frobenius of p at level d (an int conductor or a FieldSpec)."""
    spec = d if isinstance(d, FieldSpec) else factorize_conductor(d)
    if spec.n % p == 0:
        raise ValueError(f"{p} ramifies in level {spec.n}")
    return GaloisElement.from_residue(spec, p)


@dataclass(frozen=True)
class GroupRingElement:
    spec: FieldSpec
    terms: tuple  # sorted ((GaloisElement.idx, coeff), ...)

    @classmethod
    def from_dict(cls, spec: FieldSpec, d: dict) -> "GroupRingElement":
        items = []
        for g, c in d.items():
            key = g.idx if isinstance(g, GaloisElement) else tuple(g)
            if c:
                items.append((key, c))
        return cls(spec, tuple(sorted(items)))

    @classmethod
    def of(cls, g: GaloisElement, c: int = 1) -> "GroupRingElement":
        return cls.from_dict(g.spec, {g: c})

    def items(self):
        for idx, c in self.terms:
            yield GaloisElement(self.spec, idx), c

    def __len__(self):
        return len(self.terms)

    def __add__(self, other):
        if self.spec != other.spec:
            raise SpecMismatch("group ring elements over different conductors")
        d = dict(self.terms)
        for k, c in other.terms:
            d[k] = d.get(k, 0) + c
        return GroupRingElement.from_dict(self.spec, {k: c for k, c in d.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElement.from_dict(self.spec, {k: c * other for k, c in self.terms})
        if self.spec != other.spec:
            raise SpecMismatch("group ring elements over different conductors")
        d = {}
        for g, a in self.items():
            for h, b in other.items():
                k = compose(g, h).idx
                d[k] = d.get(k, 0) + a * b
        return GroupRingElement.from_dict(self.spec, d)

    __rmul__ = __mul__


def generated_subgroup(gens: Iterable[GaloisElement], spec: FieldSpec) -> frozenset:
    out = {GaloisElement.identity(spec)}
    frontier = list(out)
    gens = list(gens)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(out)


def norm_element(sub: Iterable[GaloisElement], spec: FieldSpec) -> GroupRingElement:
    """Sum of the elements of a subgroup, given as its full element set."""
    els = set(sub)
    if not els:
        raise ValueError("empty subgroup")
    if GaloisElement.identity(spec) not in els:
        raise ValueError("descriptor does not contain the identity")
    for g, h in product(els, repeat=2):
        if compose(g, h) not in els:
            raise ValueError("descriptor is not closed under composition")
    return GroupRingElement.from_dict(spec, {g: 1 for g in els})
