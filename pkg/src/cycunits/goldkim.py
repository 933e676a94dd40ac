"""Gold-Kim basis of the cyclotomic units of Q(zeta_n), and decomposition into it."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import NamedTuple

from .galois_core import FieldSpec
from .symbols import Atom, UnitSymbol, _canon_fast, add_term, canonicalize_atom, norm_lower


class NonUnitError(ValueError):
    pass


class GKIndex(NamedTuple):
    omega: tuple
    a: tuple

    @property
    def kind(self) -> str:
        return "xi" if len(self.omega) == 1 else "atom"

    def label(self) -> str:
        om = ",".join(str(i + 1) for i in self.omega)
        a = ",".join(map(str, self.a))
        return f"xi[{om};{a}]" if self.kind == "xi" else f"({om};{a})"


class _Prime(NamedTuple):
    # bookkeeping coordinate for 1 - zeta_q at a prime-power level (not a unit)
    j: int


def gk_key(x) -> tuple:
    """Total order: larger levels first, then level as a sorted tuple, then inverse lex."""
    om, a = x
    return (-len(om), tuple(om), tuple(reversed(a)))


def tuple_order(x, y) -> int:
    kx, ky = gk_key(x), gk_key(y)
    return (kx > ky) - (kx < ky)


def is_gk_index(spec: FieldSpec, x) -> bool:
    om, a = x
    P = spec.primes
    s = len(om)
    if s == 0 or len(a) != s or any(not 0 <= v < P[i].phi for i, v in zip(om, a)):
        return False
    if s == 1:
        return 1 <= a[0] < P[om[0]].half
    nz = [i for i, v in enumerate(a) if v]
    if not nz:
        return s % 2 == 0
    k = nz[-1]
    return len(nz) == k + 1 and a[k] < P[om[k]].half


def enumerate_basis(spec: FieldSpec) -> list[GKIndex]:
    P = spec.primes
    out = []
    for s in range(1, spec.r + 1):
        for om in combinations(range(spec.r), s):
            if s == 1:
                out.extend(GKIndex(om, (a,)) for a in range(1, P[om[0]].half))
                continue
            if s % 2 == 0:
                out.append(GKIndex(om, (0,) * s))
            for k in range(1, s + 1):
                rngs = [range(1, P[om[j]].phi) for j in range(k - 1)] + [range(1, P[om[k - 1]].half)]
                for t in product(*rngs):
                    out.append(GKIndex(om, tuple(t) + (0,) * (s - k)))
    out.sort(key=gk_key)
    return out


def xi_symbol(spec: FieldSpec, j: int, a: int) -> UnitSymbol:
    """(1 - zeta_q^(sigma^a)) / (1 - zeta_q) at prime position j, mod roots of unity."""
    h = spec.primes[j].half
    if not 1 <= a < h:
        raise ValueError(f"xi index {a} outside [1, {h})")
    return UnitSymbol(spec, {Atom((j,), (a,)): 1, Atom((j,), (0,)): -1}, canonical=True)


def basis_symbol(spec: FieldSpec, b) -> UnitSymbol:
    om, a = b
    if len(om) == 1:
        return xi_symbol(spec, om[0], a[0])
    return UnitSymbol(spec, {canonicalize_atom(spec, om, a): 1}, canonical=True)


def _rewrite(spec: FieldSpec, om: tuple, a: tuple) -> dict:
    """One norm-relation rewrite of a non-basis atom.

    Clears the first zero before the last nonzero coordinate, or else the
    first trailing zero.  Returns atom -> coefficient (same and lower level).
    """
    nz = [i for i, v in enumerate(a) if v]
    k = nz[-1] + 1 if nz else 0
    holes = [i for i in range(k - 1) if a[i] == 0]
    pos = holes[0] if holes else k
    out = norm_lower(spec, om, a, pos)
    for c in range(1, spec.primes[om[pos]].phi):
        b = list(a)
        b[pos] = c
        add_term(out, _canon_fast(spec, om, tuple(b)), -1)
    return out


def _solve_level(rows, rhs, n):
    """Exact Gauss-Jordan on a dense Fraction system; rhs entries are sparse dicts."""
    M = rows
    R = rhs
    for col in range(n):
        pr = next((r for r in range(col, n) if M[r][col] != 0), None)
        if pr is None:
            raise ArithmeticError("singular rewrite system")
        M[col], M[pr] = M[pr], M[col]
        R[col], R[pr] = R[pr], R[col]
        inv = 1 / M[col][col]
        if inv != 1:
            M[col] = [v * inv for v in M[col]]
            R[col] = {z: v * inv for z, v in R[col].items()}
        for r in range(n):
            f = M[r][col]
            if r != col and f != 0:
                M[r] = [u - f * v for u, v in zip(M[r], M[col])]
                for z, v in R[col].items():
                    add_term(R[r], z, -f * v)
    return R


class GoldKim:
    """Basis plus a table expressing every canonical atom in basis coordinates."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.basis = enumerate_basis(spec)
        self.position = {b: i for i, b in enumerate(self.basis)}
        self.table = self._build()

    def _build(self):
        spec = self.spec
        P = spec.primes
        bset = set(self.basis)
        table = {}
        for s in range(1, spec.r + 1):
            for om in combinations(range(spec.r), s):
                if s == 1:
                    j = om[0]
                    for a in range(P[j].half):
                        v = {_Prime(j): 1}
                        if a:
                            v[GKIndex(om, (a,))] = 1
                        table[Atom(om, (a,))] = v
                    continue
                atoms = {_canon_fast(spec, om, t) for t in product(*[range(P[i].phi) for i in om])}
                todo = sorted(x for x in atoms if x not in bset)
                for x in atoms:
                    if x in bset:
                        table[x] = {GKIndex(*x): 1}
                idx = {x: i for i, x in enumerate(todo)}
                N = len(todo)
                rows = [[Fraction(0)] * N for _ in range(N)]
                rhs = [{} for _ in range(N)]
                for x in todo:
                    i = idx[x]
                    rows[i][i] += 1
                    for y, c in _rewrite(spec, x.omega, x.idx).items():
                        if y in idx:
                            rows[i][idx[y]] -= c
                        else:
                            for z, cz in table[y].items():
                                add_term(rhs[i], z, Fraction(c * cz))
                sol = _solve_level(rows, rhs, N)
                for x in todo:
                    v = sol[idx[x]]
                    if any(c.denominator != 1 for c in v.values()):
                        raise ArithmeticError(f"non-integral expansion for {x}")
                    table[x] = {z: int(c) for z, c in v.items()}
        return table

    def expand_atom(self, atom: Atom) -> dict:
        return self.table[atom]

    def decompose(self, x: UnitSymbol) -> dict:
        if x.spec != self.spec:
            raise ValueError("symbol over a different conductor")
        out = {}
        for atom, e in x.terms.items():
            for z, c in self.table[atom].items():
                add_term(out, z, c * e)
        bad = [z for z in out if isinstance(z, _Prime)]
        if bad:
            raise NonUnitError(f"not a unit: prime-power levels {[z.j + 1 for z in bad]} do not cancel")
        return out

    def reconstruct(self, vec: dict) -> UnitSymbol:
        d = {}
        for b, c in vec.items():
            for atom, e in basis_symbol(self.spec, b).terms.items():
                add_term(d, atom, c * e)
        return UnitSymbol(self.spec, d, canonical=True)

    def dense(self, vec: dict) -> list[int]:
        row = [0] * len(self.basis)
        for b, c in vec.items():
            row[self.position[b]] = c
        return row


@lru_cache(maxsize=64)
def gold_kim(spec: FieldSpec) -> GoldKim:
    return GoldKim(spec)


def decompose(x: UnitSymbol) -> dict:
    return gold_kim(x.spec).decompose(x)


def reconstruct(spec: FieldSpec, vec: dict) -> UnitSymbol:
    return gold_kim(spec).reconstruct(vec)


def format_vector(vec: dict) -> str:
    return " ".join(f"{b.label()}:{c}" for b, c in sorted(vec.items(), key=lambda t: gk_key(t[0])))


def parse_vector(text: str) -> dict:
    out = {}
    for tok in text.split():
        lab, c = tok.rsplit(":", 1)
        if lab.startswith("xi[") and lab.endswith("]"):
            body = lab[3:-1]
        elif lab.startswith("(") and lab.endswith(")"):
            body = lab[1:-1]
        else:
            raise ValueError(f"bad label {lab!r}")
        om, a = body.split(";")
        out[GKIndex(tuple(int(t) - 1 for t in om.split(",")), tuple(int(t) for t in a.split(",")))] = int(c)
    return out
