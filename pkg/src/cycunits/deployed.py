"""Bases of cyclotomic units of totally deployed fields K = K_1 ... K_r.

K_j sits inside Q(zeta_{q_j}) and is cut out by a subgroup H_j of
(Z/q_j)*.  Positions are reordered so real factors come first; all
arithmetic uses that internal order, reports translate back.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

from .convolution import predicted_block_size
from .galois_core import FieldSpec, factorize_conductor
from .goldkim import GKIndex, gk_key, gold_kim, is_gk_index
from .lattice import Report, is_direct_factor, same_lattice, triangularity_report
from .symbols import UnitSymbol, _canon_fast, add_term, canonicalize_atom


class SpecError(ValueError):
    pass


def _subgroup_closure(gens, q):
    out = {1}
    frontier = [1]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g % q
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(out)


def _full_conductor(H, q, p) -> bool:
    # K_H has conductor q iff H misses part of the kernel of reduction mod q/p
    m = q // p
    kernel = [u for u in range(1, q) if u % p and (m == 1 or u % m == 1)]
    return not all(u in H for u in kernel)


def local_subgroups(q: int, p: int, d: int):
    """All subgroups of (Z/q)* of index d whose fixed field has conductor q."""
    units = [u for u in range(1, q) if u % p]
    phi = len(units)
    if phi % d:
        return []
    want = phi // d
    seen = set()
    out = []
    for g1 in units:
        for g2 in units:
            H = _subgroup_closure((g1, g2), q)
            if len(H) == want and H not in seen:
                seen.add(H)
                if _full_conductor(H, q, p):
                    out.append(H)
    return sorted(out, key=sorted)


@dataclass(frozen=True)
class Factor:
    p: int
    q: int
    phi: int
    d: int
    real: bool
    H: frozenset  # residues mod q


@dataclass(frozen=True)
class SubfieldSpec:
    spec: FieldSpec  # internal, real-first order
    factors: tuple  # Factor per internal position
    perm: tuple  # perm[i] = input position of internal position i
    experimental: bool = False

    @property
    def r(self):
        return len(self.factors)

    @property
    def degrees(self):
        return tuple(f.d for f in self.factors)

    @property
    def real(self):
        return tuple(f.real for f in self.factors)

    @property
    def t(self) -> int:
        """1-based position of the first non-real factor (r+1 if none)."""
        for i, f in enumerate(self.factors):
            if not f.real:
                return i + 1
        return self.r + 1

    @property
    def degree(self) -> int:
        out = 1
        for f in self.factors:
            out *= f.d
        return out

    @property
    def totally_real(self) -> bool:
        return all(self.real)

    @property
    def unit_rank(self) -> int:
        return self.degree - 1 if self.totally_real else self.degree // 2 - 1

    def h_index(self, i):
        """Residue subgroup as hybrid indices at internal position i."""
        return frozenset(self.spec.encode(i, u) for u in self.factors[i].H)

    def describe(self) -> str:
        parts = []
        for f in self.factors:
            parts.append(f"K_{f.q}: degree {f.d}, {'real' if f.real else 'non-real'}")
        return "; ".join(parts)


def _two_subgroup(q, cands, selector):
    if len(cands) == 1 and selector is None:
        return cands[0]
    if selector is None:
        raise SpecError(f"q = {q}: several subfields of this degree; pass a selector (plus/minus)")
    minus_one = q - 1
    if selector == "plus":
        pick = [H for H in cands if minus_one in H]
    elif selector == "minus":
        pick = [H for H in cands if minus_one not in H]
    else:
        gens = [int(x) for x in str(selector).split(",")]
        target = _subgroup_closure(gens, q)
        pick = [H for H in cands if H == target]
    if len(pick) != 1:
        raise SpecError(f"q = {q}: selector {selector!r} does not pick a unique subgroup")
    return pick[0]


def validate_spec(n: int, degrees, two_subgroup=None) -> SubfieldSpec:
    base = factorize_conductor(n)
    degrees = [int(x) for x in degrees]
    if len(degrees) != base.r:
        raise SpecError(f"{n} has {base.r} prime factors but {len(degrees)} degrees were given")
    facs = []
    experimental = False
    for P, d in zip(base.primes, degrees):
        if d < 1 or P.phi % d:
            raise SpecError(f"degree {d} does not divide phi({P.q}) = {P.phi}")
        if P.p == 2:
            cands = local_subgroups(P.q, 2, d)
            if not cands:
                raise SpecError(f"p = 2: no degree-{d} subfield of Q(zeta_{P.q}) has conductor {P.q}")
            H = _two_subgroup(P.q, cands, two_subgroup)
            if P.q > 8:
                experimental = True
        else:
            g_idx = {u: a for a, u in enumerate(base._dec[base.primes.index(P)])}
            H = frozenset(u for u, a in g_idx.items() if a % d == 0)
            if not _full_conductor(H, P.q, P.p):
                raise SpecError(f"prime {P.p}: the degree-{d} subfield has conductor smaller than {P.q}")
        facs.append(Factor(P.p, P.q, P.phi, d, (P.q - 1) in H, H))
    order = [i for i, f in enumerate(facs) if f.real] + [i for i, f in enumerate(facs) if not f.real]
    spec = factorize_conductor(n, [facs[i].p for i in order])
    return SubfieldSpec(spec, tuple(facs[i] for i in order), tuple(order), experimental)


# ---- generators ----

@dataclass(frozen=True)
class DeployedGenerator:
    omega: tuple
    kclass: object  # "xi", "e", or an int k
    a: tuple
    symbol: UnitSymbol = field(compare=False)
    corr: GKIndex = None

    def label(self, sub: SubfieldSpec) -> str:
        qs = ",".join(str(sub.factors[i].q) for i in self.omega)
        return f"{{{qs}}} k={self.kclass} a={self.a}"


def _ind_even(m):
    return 1 if m % 2 == 0 else 0


def _norm_symbol(sub: SubfieldSpec, omega, a, groups, half=False) -> UnitSymbol:
    """Sum over h in prod groups of atom(omega, a * h); halved when each atom appears twice."""
    spec = sub.spec
    d = {}
    for hs in product(*groups):
        idx = tuple(spec.mul_index(i, x % spec.primes[i].phi, h) for i, x, h in zip(omega, a, hs))
        add_term(d, _canon_fast(spec, omega, idx), 1)
    if half:
        if any(v % 2 for v in d.values()):
            raise ArithmeticError("norm symbol is not divisible by 2")
        d = {k: v // 2 for k, v in d.items()}
    return UnitSymbol(spec, d, canonical=True)


def xi_norm_symbol(sub: SubfieldSpec, j: int, a: int) -> UnitSymbol:
    """Norm of xi_{q_j, a} from Q(zeta_q)+ down to K_j+ (halved sum over H+ = H.<J>)."""
    spec = sub.spec
    Hp = sub.h_index(j) | {spec.flip(j, x) for x in sub.h_index(j)}
    d = {}
    for h in Hp:
        add_term(d, _canon_fast(spec, (j,), (spec.mul_index(j, a, h),)), 1)
        add_term(d, _canon_fast(spec, (j,), (h,)), -1)
    if any(v % 2 for v in d.values()):
        raise ArithmeticError("xi norm is not divisible by 2")
    return UnitSymbol(spec, {k: v // 2 for k, v in d.items()}, canonical=True)


def e_symbol(sub: SubfieldSpec, omega, shift=None) -> UnitSymbol:
    """Norm of 1 - zeta_Omega down to the all-real K_Omega, with J-averaging on all but the last factor.

    Built literally: sum over eps_j in {0,1} (j < s) of J_j^eps_j, times the
    norm over H_i / <J_i> coset representatives.  shift applies prod sigma^a_j.
    """
    omega = tuple(omega)
    if len(omega) < 2:
        raise ValueError("e_symbol needs |Omega| >= 2; singletons use the xi norms")
    if not all(sub.factors[i].real for i in omega):
        raise ValueError("e_symbol needs every factor of Omega to be real")
    spec = sub.spec
    s = len(omega)
    a = tuple(shift) if shift is not None else (0,) * s
    reps = []
    for i in omega:
        Hi = sorted(sub.h_index(i))
        seen, rr = set(), []
        for x in Hi:
            if x not in seen:
                rr.append(x)
                seen.update({x, spec.flip(i, x)})
        reps.append(rr)
    d = {}
    for eps in product((0, 1), repeat=s - 1):
        for hs in product(*reps):
            idx = []
            for k, (i, h) in enumerate(zip(omega, hs)):
                x = spec.mul_index(i, a[k] % spec.primes[i].phi, h)
                if k < s - 1 and eps[k]:
                    x = spec.flip(i, x)
                idx.append(x)
            add_term(d, _canon_fast(spec, omega, tuple(idx)), 1)
    return UnitSymbol(spec, d, canonical=True)


def t_omega(sub: SubfieldSpec, omega) -> int:
    for k, i in enumerate(omega):
        if not sub.factors[i].real:
            return k + 1
    return len(omega) + 1


def legal_k(sub: SubfieldSpec, omega) -> list:
    s = len(omega)
    t = t_omega(sub, omega)
    if t > s:
        return []
    n_c = s - t + 1
    if t == 1:
        return list(range(0 if s % 2 == 0 else 1, s + 1))
    return list(range(t - 1 if n_c % 2 == 0 else t, s + 1))


def enumerate_X(sub: SubfieldSpec, omega, k: int):
    """Tuples of X_Omega^k(K) paired with their correspond tuples."""
    omega = tuple(omega)
    s = len(omega)
    if s < 2:
        raise ValueError("enumerate_X needs |Omega| >= 2")
    if k not in legal_k(sub, omega):
        raise ValueError(f"k = {k} is not in the legal range {legal_k(sub, omega)} for this level")
    t = t_omega(sub, omega)
    F = [sub.factors[i] for i in omega]
    d = lambda j: F[j - 1].d  # noqa: E731  (1-based helpers mirror the tuple formulas)
    ph = lambda j: F[j - 1].phi  # noqa: E731
    tail = lambda lo: tuple(d(j) // 2 + _ind_even(s - j) * ph(j) // 2 for j in range(lo, s + 1))  # noqa: E731
    out = []
    if k == s:
        for b in product(*([range(1, d(j)) for j in range(1, s)] + [range(1, d(s) // 2)])):
            out.append((tuple(b), tuple(b)))
    elif k == 0:
        out.append((tail(1), (0,) * s))
    elif k == t - 1:
        e = _ind_even(s - k)
        for b in product(*[range(1, d(j)) for j in range(1, t)]):
            a = tuple(bj + e * ph(j) // 2 for j, bj in zip(range(1, t), b)) + tail(t)
            corr = tuple(x % ph(j) for j, x in zip(range(1, t), a[:t - 1])) + (d(t) // 2,) + (0,) * (s - t)
            out.append((a, corr))
    else:
        e = _ind_even(s - k)
        for b in product(*([range(1, d(j)) for j in range(1, k)] + [range(1, d(k) // 2)])):
            a = tuple(bj + e * ph(j) // 2 for j, bj in zip(range(1, k + 1), b)) + tail(k + 1)
            out.append((a, tuple(b) + (0,) * (s - k)))
    return out


def basis(sub: SubfieldSpec) -> list[DeployedGenerator]:
    spec = sub.spec
    out = []
    for s in range(1, sub.r + 1):
        for om in combinations(range(sub.r), s):
            if s == 1:
                j = om[0]
                f = sub.factors[j]
                dt = f.d if f.real else f.d // 2
                for a in range(1, dt):
                    out.append(DeployedGenerator(om, "xi", (a,), xi_norm_symbol(sub, j, a), GKIndex(om, (a,))))
                continue
            if sub.factors[om[-1]].real:
                for a in product(*[range(1, sub.factors[i].d) for i in om]):
                    out.append(DeployedGenerator(om, "e", tuple(a), e_symbol(sub, om, a), GKIndex(om, tuple(a))))
                continue
            groups = [sorted(sub.h_index(i)) for i in om]
            for k in legal_k(sub, om):
                for a, corr in enumerate_X(sub, om, k):
                    a = tuple(x % spec.primes[i].phi for x, i in zip(a, om))
                    out.append(DeployedGenerator(om, k, a, _norm_symbol(sub, om, a, groups), GKIndex(om, corr)))
    return out


def correspond_tuple(g: DeployedGenerator) -> GKIndex:
    return g.corr


def exception_class(sub: SubfieldSpec, g: DeployedGenerator) -> bool:
    """The k = t_Omega - 1 class, whose pinned tuple is not the least in its column."""
    if not isinstance(g.kclass, int) or isinstance(g.kclass, bool):
        return False
    t = t_omega(sub, g.omega)
    return t > 1 and g.kclass == t - 1


# ---- verification ----

@dataclass
class DeployedReport:
    sub: SubfieldSpec
    generators: list
    vectors: list
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.verdict for c in self.checks)


def transport(x: UnitSymbol, target: FieldSpec) -> UnitSymbol:
    """Re-express a symbol over the same conductor with another prime order."""
    src = x.spec
    if src.n != target.n:
        raise ValueError("different conductors")
    pos = {P.p: i for i, P in enumerate(target.primes)}
    d = {}
    for (om, a), e in x.terms.items():
        m, u = src.residue(om, a)
        om2 = tuple(sorted(pos[src.primes[i].p] for i in om))
        add_term(d, canonicalize_atom(target, om2, target.index_of(om2, u)), e)
    return UnitSymbol(target, d, canonical=True)


def real_contraction(sub: SubfieldSpec, n: int):
    """Degrees of K+ when exactly one factor is non-real, or None when not applicable."""
    nonreal = [i for i, f in enumerate(sub.factors) if not f.real]
    if len(nonreal) != 1:
        return None
    i = nonreal[0]
    inp = [0] * sub.r
    for k, f in enumerate(sub.factors):
        inp[sub.perm[k]] = f.d // 2 if k == i else f.d
    # after contraction every factor is real, and at p = 2 the real subgroup is unique
    sel = "plus" if any(f.p == 2 for f in sub.factors) else None
    try:
        return validate_spec(n, inp, sel)
    except SpecError:
        return None


def verify(sub: SubfieldSpec, checks=("count", "snf", "pin", "triangular", "corollary")) -> DeployedReport:
    spec = sub.spec
    G = gold_kim(spec)
    gens = basis(sub)
    vecs = [G.decompose(g.symbol) for g in gens]
    out = []
    if "count" in checks:
        levels = {}
        for g in gens:
            levels[g.omega] = levels.get(g.omega, 0) + 1
        predicted = {}
        for s in range(1, sub.r + 1):
            for om in combinations(range(sub.r), s):
                predicted[om] = predicted_block_size(sub.degrees, sub.real, om)
        per_level = all(levels.get(om, 0) == v for om, v in predicted.items())
        ok = len(gens) == sub.unit_rank and per_level
        out.append(Report("cardinality", ok, {"count": len(gens), "expected": sub.unit_rank,
                                              "per_level_match": per_level}))
    if "snf" in checks:
        out.append(is_direct_factor(vecs, G.basis) if gens else Report("direct factor", sub.unit_rank == 0, {}))
    if "pin" in checks:
        corr = [g.corr for g in gens]
        pins = [v.get(c, 0) for v, c in zip(vecs, corr)]
        valid = all(is_gk_index(spec, c) for c in corr)
        ok = len(set(corr)) == len(corr) and all(abs(p) == 1 for p in pins)
        out.append(Report("pinned +-1 and injective", ok, {
            "injective": len(set(corr)) == len(corr), "valid_indices": valid,
            "bad": [(g.label(sub), c.label(), p) for g, c, p in zip(gens, corr, pins) if abs(p) != 1]}))
    if "triangular" in checks:
        cols = [(i, g.corr, v) for i, (g, v) in enumerate(zip(gens, vecs))]
        exc = [i for i, g in enumerate(gens) if exception_class(sub, g)]
        out.append(triangularity_report(cols, gk_key, exceptions=exc, check_pins=False))
    if "corollary" in checks:
        sub2 = real_contraction(sub, spec.n)
        if sub2 is not None:
            vecs2 = [G.decompose(transport(g.symbol, spec)) for g in basis(sub2)]
            A = [G.dense(v) for v in vecs]
            B = [G.dense(v) for v in vecs2]
            out.append(Report("Was(K) = Z Was(K+)", same_lattice(A, B) if A and B else A == B,
                              {"real_degrees": list(sub2.degrees), "hnf_rank": len(B)}))
    return DeployedReport(sub, gens, vecs, out)
