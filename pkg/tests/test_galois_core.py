from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from cycunits.galois_core import (ConductorError, GaloisElement, compose, conjugation, factorize_conductor,
                                  frobenius, generated_subgroup, invert, norm_element, primitive_root)

CONDUCTORS = [n for n in range(3, 301) if n % 4 != 2]


def test_factorize_examples():
    s = factorize_conductor(15)
    assert [(P.p, P.e, P.q, P.phi) for P in s.primes] == [(3, 1, 3, 2), (5, 1, 5, 4)]
    s = factorize_conductor(12)
    assert [(P.p, P.e, P.q, P.phi) for P in s.primes] == [(2, 2, 4, 2), (3, 1, 3, 2)]


@pytest.mark.parametrize("n", [0, 1, 2, 6, 10, 30])
def test_factorize_rejects(n):
    with pytest.raises(ConductorError):
        factorize_conductor(n)


def test_factorize_custom_order():
    s = factorize_conductor(105, order=[5, 7, 3])
    assert [P.p for P in s.primes] == [5, 7, 3]
    with pytest.raises(ValueError):
        factorize_conductor(105, order=[5, 7])


# frozen from an exhaustive multiplicative-order search
@pytest.mark.parametrize("q,g", [(3, 2), (5, 2), (7, 3), (9, 2), (11, 2), (13, 2), (25, 2), (27, 2),
                                 (49, 3), (81, 2), (121, 2), (125, 2)])
def test_primitive_root(q, g):
    assert primitive_root(q) == g


@pytest.mark.parametrize("q", [4, 8, 15, 1, 12])
def test_primitive_root_rejects(q):
    with pytest.raises(ValueError):
        primitive_root(q)


def test_frobenius_examples():
    assert frobenius(3, 5).idx == (3,)  # 2^3 = 8 = 3 mod 5
    assert frobenius(11, 5).idx == (0,)
    assert frobenius(5, 3).idx == (1,)
    with pytest.raises(ValueError):
        frobenius(5, 15)


def test_conjugation():
    s = factorize_conductor(15)
    J = conjugation(s)
    assert J.residue() == 14
    assert invert(J) == J
    s4 = factorize_conductor(4)
    J4 = conjugation(s4)
    assert J4.idx == (1,)
    assert all(s4.decode(0, 1) * x % 4 == (-x) % 4 for x in (1, 3))


@pytest.mark.parametrize("n", CONDUCTORS)
def test_encode_decode_isomorphism(n):
    s = factorize_conductor(n)
    units = s.units()
    els = {u: GaloisElement.from_residue(s, u) for u in units}
    assert len({g.idx for g in els.values()}) == len(units)
    for u, g in els.items():
        assert g.residue() == u
    # homomorphism on a sample of pairs
    for u in units[:12]:
        for v in units[-12:]:
            assert compose(els[u], els[v]).residue() == u * v % n


@pytest.mark.parametrize("n", [5, 7, 9, 25, 27, 15, 105])
def test_sigma_order_odd(n):
    s = factorize_conductor(n)
    for j, P in enumerate(s.primes):
        g = s.decode(j, 1)
        assert all(pow(g, k, P.q) != 1 for k in range(1, P.phi))
        assert pow(g, P.phi, P.q) == 1


@pytest.mark.parametrize("q", [8, 16, 32, 64])
def test_two_adic_split(q):
    s = factorize_conductor(q)
    h = s.primes[0].half
    # 5 has order h and -1 is outside <5>: together they generate
    assert {s.decode(0, a) for a in range(2 * h)} == {u for u in range(1, q, 2)}
    J = GaloisElement(s, (h,))
    for a in range(2 * h):
        g = GaloisElement(s, (a,))
        assert compose(J, g) == compose(g, J)
        assert compose(J, g).idx == ((a + h) % (2 * h),)
    assert compose(J, J) == GaloisElement.identity(s)


@st.composite
def element_triples(draw):
    n = draw(st.sampled_from(CONDUCTORS))
    s = factorize_conductor(n)
    units = s.units()
    a, b, c = (GaloisElement.from_residue(s, draw(st.sampled_from(units))) for _ in range(3))
    return a, b, c


@given(element_triples())
@settings(max_examples=200, deadline=None)
def test_group_laws(t):
    a, b, c = t
    e = GaloisElement.identity(a.spec)
    assert compose(compose(a, b), c) == compose(a, compose(b, c))
    assert compose(a, invert(a)) == e
    assert compose(e, a) == a
    assert compose(a, b) == compose(b, a)


@given(st.sampled_from(CONDUCTORS), st.data())
@settings(max_examples=100, deadline=None)
def test_frobenius_decodes_to_p(n, data):
    primes = [p for p in range(2, 200) if all(p % k for k in range(2, p)) and gcd(p, n) == 1]
    p = data.draw(st.sampled_from(primes))
    assert frobenius(p, n).residue() == p % n


def test_norm_element_examples():
    s15 = factorize_conductor(15)
    triv = norm_element([GaloisElement.identity(s15)], s15)
    assert len(triv) == 1
    s5 = factorize_conductor(5)
    H = generated_subgroup([GaloisElement.sigma(s5, 0, 2)], s5)
    N = norm_element(H, s5)
    assert sorted(idx for idx, _ in N.terms) == [(0,), (2,)]
    J1 = GaloisElement(s15, (1, 0))
    N2 = norm_element(generated_subgroup([J1], s15), s15)
    assert sorted(idx for idx, _ in N2.terms) == [(0, 0), (1, 0)]


def test_norm_element_rejects_non_subgroup():
    s5 = factorize_conductor(5)
    with pytest.raises(ValueError):
        norm_element([GaloisElement.identity(s5), GaloisElement.sigma(s5, 0, 1)], s5)


@pytest.mark.parametrize("n,gens", [(15, [(1, 0)]), (35, [(0, 2)]), (21, [(1, 0), (0, 3)]), (40, [(2, 0)])])
def test_norm_idempotent_up_to_order(n, gens):
    s = factorize_conductor(n)
    H = generated_subgroup([GaloisElement(s, g) for g in gens], s)
    N = norm_element(H, s)
    assert N * N == N * len(H)


def test_mismatched_specs():
    a = GaloisElement.identity(factorize_conductor(15))
    b = GaloisElement.identity(factorize_conductor(21))
    with pytest.raises(ValueError):
        compose(a, b)
