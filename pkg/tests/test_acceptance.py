"""One test per acceptance criterion, each at its stated tolerance."""
import random
from math import gcd
from fractions import Fraction
from itertools import combinations, product

import mpmath

from cycunits.convolution import (SubsetFunction, cumulative, lemma7_check, lemma7_functions, mobius_inverse,
                                  predicted_block_size)
from cycunits.deployed import basis, transport, validate_spec, verify
from cycunits.galois_core import GaloisElement, conjugation, factorize_conductor
from cycunits.goldkim import basis_symbol, gold_kim
from cycunits.lattice import (embed_matrix, numeric_rank, root_of_unity_quotient, same_lattice,
                              same_mod_roots_of_unity, smith_normal_form)
from cycunits.realplus import expected_real_divisors, hasse_order, real_basis
from cycunits.sampling import random_unit
from cycunits.symbols import UnitSymbol, canonicalize_atom, galois_act, norm_relation_expand

SUITE = [9, 12, 15, 20, 21, 35, 45, 105]
PREC = 256


def test_criterion_1_gold_kim_cardinality(record):
    bad = []
    for n in SUITE:
        s = factorize_conductor(n)
        B = gold_kim(s).basis
        fs = lemma7_functions([P.phi for P in s.primes])["f_C"]
        predicted = sum(fs(m) for m in range(1, 1 << s.r))
        per_level = {}
        for b in B:
            per_level[b.omega] = per_level.get(b.omega, 0) + 1
        levels_ok = all(per_level.get(om, 0) == predicted_block_size([P.phi for P in s.primes], (False,) * s.r, om)
                        for k in range(1, s.r + 1) for om in combinations(range(s.r), k))
        if not (len(B) == s.phi // 2 - 1 == predicted and levels_ok):
            bad.append(n)
    assert record(1, not bad, f"conductors {SUITE}" + (f" failing {bad}" if bad else ""))


def test_criterion_2_decomposition_soundness(record):
    bad = []
    for n in SUITE:
        s = factorize_conductor(n)
        G = gold_kim(s)
        for b in G.basis:
            if G.decompose(basis_symbol(s, b)) != {b: 1}:
                bad.append((n, b))
        rng = random.Random(1000 + n)
        for _ in range(200):
            x = random_unit(s, rng)
            if not same_mod_roots_of_unity(x, G.reconstruct(G.decompose(x)), prec=PREC, tol=1e-6):
                bad.append((n, x))
    assert record(2, not bad, f"200 random symbols x {len(SUITE)} conductors at {PREC} bits")


def test_criterion_3_galois_closure(record):
    bad = []
    for n in SUITE:
        s = factorize_conductor(n)
        G = gold_kim(s)
        gens = [GaloisElement.sigma(s, j) for j in range(s.r)] + [conjugation(s)]
        for g in gens:
            for b in G.basis:
                v = G.decompose(galois_act(g, basis_symbol(s, b)))
                if not all(isinstance(c, int) for c in v.values()):
                    bad.append((n, g.idx, b))
    assert record(3, not bad)


def test_criterion_4_lemma7(record):
    count, bad = 0, []
    for r in range(1, 6):
        for d in product(range(2, 9), repeat=r):
            count += 1
            if not lemma7_check(d).ok:
                bad.append(d)
    assert record(4, not bad, f"{count} degree vectors, sums and pointwise inversion")


DEPLOYED = [(35, (2, 3)), (35, (2, 6)), (35, (4, 6)), (15, (2, 2)), (15, (2, 4)), (105, (2, 2, 3))]


def test_criterion_5_deployed_bases(record):
    bad = []
    for n, d in DEPLOYED:
        rep = verify(validate_spec(n, d), checks=("count", "snf", "pin", "triangular"))
        if not rep.ok:
            bad.append((n, d, [c.check for c in rep.checks if not c.verdict]))
    assert record(5, not bad, f"{len(DEPLOYED)} specs" + (f" failing {bad}" if bad else ""))


def test_criterion_6_real_plus(record):
    bad = []
    for n in (9, 12, 15, 21):
        s = factorize_conductor(n)
        G = gold_kim(s)
        gens = real_basis(s)
        k = s.phi // 2 - 1
        rank = numeric_rank(embed_matrix([g.symbol() for g in gens], PREC), tol=1e-8)
        divs = smith_normal_form([G.dense(g.image()) for g in gens]).divisors
        want = (1,) * k if s.r == 1 else (1,) * (k - 1) + (2,)
        if not (len(gens) == k and rank == k and divs == want == expected_real_divisors(s)):
            bad.append((n, len(gens), rank, divs))
    assert record(6, not bad)


def test_criterion_7_hasse(record):
    bad = []
    for n in SUITE:
        s = factorize_conductor(n)
        if s.r >= 2:
            x = UnitSymbol.atom(s, tuple(range(s.r)), (0,) * s.r)
            if hasse_order(x, PREC) != 2:
                bad.append(n)
        else:
            if any(hasse_order(basis_symbol(s, b), PREC) != 1 for b in gold_kim(s).basis):
                bad.append(n)
    assert record(7, not bad, "composite -> 2, prime power xi -> 1")


def test_criterion_8_one_nonreal_factor(record):
    sub = validate_spec(35, (2, 6))
    sub_plus = validate_spec(35, (2, 3))
    G = gold_kim(sub.spec)
    A = [G.dense(G.decompose(g.symbol)) for g in basis(sub)]
    B = [G.dense(G.decompose(transport(g.symbol, sub.spec))) for g in basis(sub_plus)]
    assert record(8, same_lattice(A, B), "HNF of (35,(2,6)) vs (35,(2,3))")


def test_criterion_9_relation_oracles(record):
    rng = random.Random(9)
    conductors = [n for n in range(3, 200) if n % 4 != 2]
    sign_bad = norm_bad = 0
    with mpmath.workprec(PREC):
        for _ in range(500):
            n = rng.choice(conductors)
            a = rng.choice([u for u in range(1, n) if gcd(u, n) == 1])
            z = mpmath.expjpi(mpmath.mpf(2 * a) / n)
            lhs = 1 - z
            rhs = -z * (1 - 1 / z)
            s = factorize_conductor(n)
            full = tuple(range(s.r))
            same_atom = (canonicalize_atom(s, full, s.index_of(full, a))
                         == canonicalize_atom(s, full, s.index_of(full, n - a)))
            if abs(lhs - rhs) > 1e-8 or not same_atom or not root_of_unity_quotient(lhs, 1 - 1 / z, n, tol=1e-8):
                sign_bad += 1
    multi = [n for n in conductors if len(factorize_conductor(n).primes) >= 2]
    done = 0
    while done < 500:
        s = factorize_conductor(rng.choice(multi))
        size = rng.randint(2, s.r)
        om = tuple(sorted(rng.sample(range(s.r), size)))
        pos = rng.randrange(size)
        a = [rng.randrange(s.primes[i].phi) for i in om]
        a[pos] = 0
        atom = canonicalize_atom(s, om, tuple(a))
        # canonical form may flip the chosen coordinate; the relation holds for any value there
        rhs = norm_relation_expand(atom, om[pos], s, strict=False)
        if not same_mod_roots_of_unity(UnitSymbol(s, {atom: 1}), rhs, prec=PREC, tol=1e-8):
            norm_bad += 1
        done += 1
    mob_bad = 0
    for _ in range(1000):
        m = rng.randint(0, 8)
        f = SubsetFunction(m, tuple(Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(1 << m)))
        if mobius_inverse(cumulative(f)) != f or cumulative(mobius_inverse(f)) != f:
            mob_bad += 1
    ok = not (sign_bad or norm_bad or mob_bad)
    assert record(9, ok, f"sign failures {sign_bad}/500, norm failures {norm_bad}/500, inversion failures {mob_bad}/1000")
