from itertools import product

import pytest
from sympy.ntheory.modular import crt

from cycunits.deployed import (SpecError, basis, e_symbol, enumerate_X, exception_class, legal_k, local_subgroups,
                               real_contraction, t_omega, transport, validate_spec, verify, xi_norm_symbol)
from cycunits.galois_core import factorize_conductor
from cycunits.goldkim import gold_kim
from cycunits.lattice import embed_matrix, numeric_rank
from cycunits.symbols import UnitSymbol, add_term, canonicalize_atom, is_unit

SPECS = [(35, (2, 3), None), (35, (2, 6), None), (35, (4, 6), None), (15, (2, 2), None), (15, (2, 4), None),
         (105, (2, 2, 3), None)]
EVEN = [(12, (2, 2), None), (24, (2, 2), "plus"), (24, (2, 2), "minus"), (40, (2, 4), "plus"),
        (40, (4, 2), None), (60, (2, 2, 4), None), (56, (2, 3), "plus")]


def test_validate_examples():
    s = validate_spec(35, (2, 3))
    assert s.real == (True, True) and s.t == 3 and s.unit_rank == 5
    s = validate_spec(35, (2, 6))
    assert s.real == (True, False) and s.t == 2 and s.degree == 12
    s = validate_spec(105, (2, 2, 3))
    assert [f.q for f in s.factors] == [5, 7, 3] and s.perm == (1, 2, 0)
    assert not validate_spec(40, (2, 4), "plus").experimental
    assert validate_spec(48, (4, 2), "plus").experimental


@pytest.mark.parametrize("args", [(35, (2, 4)), (35, (2,)), (15, (1, 2)), (24, (2, 2)), (24, (2, 2), "7,5")])
def test_validate_rejects(args):
    with pytest.raises(SpecError):
        validate_spec(*args)


def test_local_subgroups_two_adic():
    # degree 2 subfields of Q(zeta_8) with conductor 8: Q(sqrt 2) and Q(sqrt -2)
    assert [sorted(H) for H in local_subgroups(8, 2, 2)] == [[1, 3], [1, 7]]
    assert local_subgroups(16, 2, 8) == [frozenset({1})]
    assert local_subgroups(8, 2, 3) == []


def test_legal_k_and_X():
    sub = validate_spec(35, (4, 6))
    assert t_omega(sub, (0, 1)) == 1 and legal_k(sub, (0, 1)) == [0, 1, 2]
    assert enumerate_X(sub, (0, 1), 0) == [((2, 6), (0, 0))]
    assert enumerate_X(sub, (0, 1), 1) == [((1, 6), (1, 0))]
    assert len(enumerate_X(sub, (0, 1), 2)) == 6
    sub = validate_spec(35, (2, 6))
    assert legal_k(sub, (0, 1)) == [2]
    with pytest.raises(ValueError):
        enumerate_X(sub, (0, 1), 1)
    sub = validate_spec(455, (2, 2, 4))
    assert legal_k(sub, (0, 1, 2)) == [1, 2, 3]
    assert enumerate_X(sub, (0, 1, 2), 1) == [((3, 1, 8), (3, 1, 0))]
    assert enumerate_X(sub, (0, 1, 2), 2) == []


def literal_e(sub, omega, shift):
    """Sum over signs on all but the last factor and over coset representatives of H_i / {+-1}."""
    spec = sub.spec
    reps = []
    for i in omega:
        q = sub.factors[i].q
        seen, rr = set(), []
        for h in sorted(sub.factors[i].H):
            if h not in seen:
                rr.append(h)
                seen |= {h, q - h}
        reps.append(rr)
    d = {}
    for eps in product((1, -1), repeat=len(omega) - 1):
        for hs in product(*reps):
            res, mods = [], []
            for k, (i, h) in enumerate(zip(omega, hs)):
                q = sub.factors[i].q
                sgn = eps[k] if k < len(omega) - 1 else 1
                res.append(sgn * h * spec.decode(i, shift[k] % spec.primes[i].phi) % q)
                mods.append(q)
            u = int(crt(mods, res)[0])
            add_term(d, canonicalize_atom(spec, tuple(omega), spec.index_of(tuple(omega), u)), 1)
    return UnitSymbol(spec, d, canonical=True)


@pytest.mark.parametrize("n,deg,sel", [(35, (2, 3), None), (105, (2, 2, 3), None), (455, (2, 3, 6), None),
                                       (40, (2, 2), "plus")])
def test_e_symbol_matches_literal_product(n, deg, sel):
    sub = validate_spec(n, deg, sel)
    reals = [i for i in range(sub.r) if sub.factors[i].real]
    omega = tuple(reals[:3])
    for shift in product(*[range(sub.factors[i].d) for i in omega]):
        assert e_symbol(sub, omega, shift) == literal_e(sub, omega, shift)


def test_e_symbol_example():
    sub = validate_spec(35, (2, 3))
    # norm of 1 - zeta_35 averaged over +-1 at 5: residues 1 and 29
    assert set(e_symbol(sub, (0, 1)).terms) == {canonicalize_atom(sub.spec, (0, 1), (0, 0)),
                                                canonicalize_atom(sub.spec, (0, 1), (2, 0))}
    with pytest.raises(ValueError):
        e_symbol(validate_spec(35, (2, 6)), (0, 1))
    with pytest.raises(ValueError):
        e_symbol(sub, (0,))


def test_xi_norm_is_unit():
    sub = validate_spec(35, (2, 6))
    for a in range(1, 3):
        assert is_unit(xi_norm_symbol(sub, 1, a))


@pytest.mark.parametrize("n,deg,sel", SPECS + EVEN)
def test_verify(n, deg, sel):
    rep = verify(validate_spec(n, deg, sel))
    assert rep.ok, [c for c in rep.checks if not c.verdict]
    assert len(rep.generators) == rep.sub.unit_rank


@pytest.mark.parametrize("n,deg,sel", [(35, (2, 6), None), (105, (2, 2, 3), None), (24, (2, 2), "minus")])
def test_generators_numerically_independent(n, deg, sel):
    rep = verify(validate_spec(n, deg, sel), checks=())
    assert numeric_rank(embed_matrix([g.symbol for g in rep.generators])) == rep.sub.unit_rank


def test_full_field_is_gold_kim_lattice():
    rep = verify(validate_spec(15, (2, 4)))
    G = gold_kim(rep.sub.spec)
    assert sorted(g.corr for g in rep.generators) == sorted(G.basis)


def test_k_t_minus_one_pin_exception():
    # the only failure: pinned coefficient 2 on the k = t - 1 column
    sub = validate_spec(455, (2, 2, 4))
    rep = verify(sub)
    verdicts = {c.check: c for c in rep.checks}
    assert verdicts["cardinality"].verdict and verdicts["direct factor"].verdict
    assert verdicts["triangularity"].verdict
    pin = verdicts["pinned +-1 and injective"]
    assert not pin.verdict and pin.witnesses["injective"]
    assert [b[2] for b in pin.witnesses["bad"]] == [2]
    bad = [g for g, v in zip(rep.generators, rep.vectors) if abs(v.get(g.corr, 0)) != 1]
    assert all(exception_class(sub, g) for g in bad)


def test_real_contraction():
    sub = validate_spec(35, (2, 6))
    assert real_contraction(sub, 35).degrees == (2, 3)
    assert real_contraction(validate_spec(35, (4, 6)), 35) is None
    assert real_contraction(validate_spec(35, (2, 3)), 35) is None


def test_transport_round_trip():
    a = factorize_conductor(105)
    b = factorize_conductor(105, [5, 7, 3])
    x = UnitSymbol.atom(a, (0, 1, 2), (1, 2, 3)) * UnitSymbol.atom(a, (1, 2), (0, 1))
    assert transport(transport(x, b), a) == x
    assert transport(x, b) != x


def test_basis_levels():
    sub = validate_spec(105, (2, 2, 3))
    # the level containing the degree-2 factor at 3 contributes nothing
    assert {g.omega for g in basis(sub)} == {(0,), (1,), (0, 1)}
    sub = validate_spec(455, (2, 2, 4))
    counts = {}
    for g in basis(sub):
        counts[g.omega] = counts.get(g.omega, 0) + 1
    assert counts == {(0,): 1, (2,): 1, (0, 2): 1, (1, 2): 2, (0, 1, 2): 2}


def test_known_direct_factor_counterexample():
    # full-degree non-real factor at 17: the k = t - 1 tuple is not a Gold-Kim index
    # and the span picks up an index-2 sublattice
    sub = validate_spec(663, (2, 2, 16))
    rep = verify(sub, checks=("count", "snf"))
    verdicts = {c.check: c for c in rep.checks}
    assert verdicts["cardinality"].verdict
    divs = verdicts["direct factor"].witnesses["divisors"]
    assert divs[:-1] == [1] * (len(divs) - 1) and divs[-1] == 2
