"""Incidence algebra of the boolean lattice: subset convolution and Moebius inversion.

Subsets of a ground set of size m are bitmasks in [0, 2^m).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

MAX_GROUND = 20


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _submasks(mask: int):
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


@dataclass(frozen=True)
class SubsetFunction:
    size: int
    values: tuple  # Fraction per mask

    def __post_init__(self):
        if not 0 <= self.size <= MAX_GROUND:
            raise ValueError(f"ground set size {self.size} outside [0, {MAX_GROUND}]")
        if len(self.values) != 1 << self.size:
            raise ValueError("table is not total on the power set")

    @classmethod
    def from_callable(cls, size: int, fn) -> "SubsetFunction":
        vals = []
        for mask in range(1 << size):
            members = frozenset(i for i in range(size) if mask >> i & 1)
            vals.append(Fraction(fn(members)))
        return cls(size, tuple(vals))

    def __call__(self, subset) -> Fraction:
        if isinstance(subset, int):
            return self.values[subset]
        mask = 0
        for i in subset:
            mask |= 1 << i
        return self.values[mask]

    def __add__(self, other):
        _same(self, other)
        return SubsetFunction(self.size, tuple(a + b for a, b in zip(self.values, other.values)))

    def __mul__(self, other):
        return convolve(self, other)


def _same(f, g):
    if f.size != g.size:
        raise ValueError("ground sets differ")


def convolve(f: SubsetFunction, g: SubsetFunction) -> SubsetFunction:
    """(f*g)(S) = sum over X subset of S of f(X) g(S minus X)."""
    _same(f, g)
    out = []
    for S in range(1 << f.size):
        out.append(sum((f.values[X] * g.values[S ^ X] for X in _submasks(S)), Fraction(0)))
    return SubsetFunction(f.size, tuple(out))


def delta(size: int) -> SubsetFunction:
    return SubsetFunction(size, tuple(Fraction(int(m == 0)) for m in range(1 << size)))


def zeta(size: int) -> SubsetFunction:
    return SubsetFunction(size, (Fraction(1),) * (1 << size))


def mobius(size: int) -> SubsetFunction:
    return SubsetFunction(size, tuple(Fraction((-1) ** _popcount(m)) for m in range(1 << size)))


def cumulative(f: SubsetFunction) -> SubsetFunction:
    """Subset sums, via the fast zeta transform."""
    v = list(f.values)
    for i in range(f.size):
        bit = 1 << i
        for m in range(1 << f.size):
            if m & bit:
                v[m] += v[m ^ bit]
    return SubsetFunction(f.size, tuple(v))


def mobius_inverse(g: SubsetFunction) -> SubsetFunction:
    """f(S) = sum over X subset of S of (-1)^(|S|-|X|) g(X)."""
    v = list(g.values)
    for i in range(g.size):
        bit = 1 << i
        for m in range(1 << g.size):
            if m & bit:
                v[m] -= v[m ^ bit]
    return SubsetFunction(g.size, tuple(v))


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


def lemma7_functions(d):
    """f_C, f_R, g_C, g_R for degree vector d; each maps the empty set to 1."""
    d = list(d)
    r = len(d)

    def f_c(S):
        if not S:
            return 1
        return Fraction(_prod(d[i] - 1 for i in S), 2) + Fraction((-1) ** len(S), 2)

    def f_r(S):
        return _prod(d[i] - 1 for i in S) if S else 1

    def g_c(S):
        return Fraction(_prod(d[i] for i in S), 2) if S else 1

    def g_r(S):
        return _prod(d[i] for i in S) if S else 1

    return {name: SubsetFunction.from_callable(r, fn)
            for name, fn in (("f_C", f_c), ("f_R", f_r), ("g_C", g_c), ("g_R", g_r))}


@dataclass(frozen=True)
class Lemma7Report:
    d: tuple
    sum_f_c: Fraction
    g_c_minus_1: Fraction
    sum_f_r: Fraction
    g_r_minus_1: Fraction
    mobius_c: bool
    mobius_r: bool

    @property
    def ok(self) -> bool:
        return (self.sum_f_c == self.g_c_minus_1 and self.sum_f_r == self.g_r_minus_1
                and self.mobius_c and self.mobius_r)


def lemma7_check(d) -> Lemma7Report:
    """Check both sum identities plus the pointwise form f = mu * g on nonempty sets.

    Works with doubled integer tables (2 f_C, 2 g_C are integral), so the
    arithmetic stays exact without Fraction overhead.
    """
    d = tuple(int(x) for x in d)
    r = len(d)
    if not 1 <= r <= 12:
        raise ValueError("need 1 <= r <= 12")
    if any(x < 2 for x in d):
        raise ValueError("degrees must be >= 2")
    size = 1 << r
    pd = [1] * size  # prod d_i over the subset
    pm = [1] * size  # prod (d_i - 1)
    for m in range(1, size):
        low = (m & -m).bit_length() - 1
        pd[m] = pd[m & (m - 1)] * d[low]
        pm[m] = pm[m & (m - 1)] * (d[low] - 1)
    sign = [(-1) ** bin(m).count("1") for m in range(size)]
    f_c2 = [2] + [pm[m] + sign[m] for m in range(1, size)]
    f_r2 = [2] + [2 * pm[m] for m in range(1, size)]
    g_c2 = [2] + [pd[m] for m in range(1, size)]
    g_r2 = [2] + [2 * pd[m] for m in range(1, size)]
    full = size - 1
    sfc = Fraction(sum(f_c2[1:]), 2)
    sfr = Fraction(sum(f_r2[1:]), 2)
    mc = mobius_inverse(SubsetFunction(r, tuple(g_c2))).values
    mr = mobius_inverse(SubsetFunction(r, tuple(g_r2))).values
    ok_c = all(mc[m] == f_c2[m] for m in range(1, size))
    ok_r = all(mr[m] == f_r2[m] for m in range(1, size))
    return Lemma7Report(d, sfc, Fraction(g_c2[full], 2) - 1, sfr, Fraction(g_r2[full], 2) - 1, ok_c, ok_r)


def predicted_block_size(degrees, real, omega) -> int:
    """Expected number of generators at level omega for a deployed field."""
    omega = tuple(omega)
    if not omega:
        raise ValueError("empty level")
    om_r = [i for i in omega if real[i]]
    om_c = [i for i in omega if not real[i]]
    if not om_c:
        return _prod(degrees[i] - 1 for i in omega)
    v = Fraction(_prod(degrees[i] - 1 for i in omega), 2) + Fraction((-1) ** len(om_c), 2) * _prod(
        degrees[i] - 1 for i in om_r)
    if v.denominator != 1 or v < 0:
        raise ArithmeticError(f"block size {v} is not a nonnegative integer")
    return int(v)


def all_degree_vectors(rmax: int, lo: int, hi: int):
    for r in range(1, rmax + 1):
        yield from product(range(lo, hi + 1), repeat=r)


def nonempty_subsets(r: int):
    for s in range(1, r + 1):
        yield from combinations(range(r), s)
