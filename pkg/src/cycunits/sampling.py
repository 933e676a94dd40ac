"""Random unit symbols for soundness checks."""
from __future__ import annotations

import random
from itertools import combinations

from .galois_core import FieldSpec
from .symbols import UnitSymbol, add_term, canonicalize_atom


def random_unit(spec: FieldSpec, rng: random.Random, n_terms: int | None = None, emax: int = 3) -> UnitSymbol:
    """Product of random atoms with exponents in [-emax, emax].

    Prime-power levels enter only as ratios atom(a)/atom(b), so the result is a unit.
    """
    levels = [om for s in range(1, spec.r + 1) for om in combinations(range(spec.r), s)]
    if n_terms is None:
        n_terms = rng.randint(1, 5)
    d = {}
    for _ in range(n_terms):
        om = rng.choice(levels)
        a = tuple(rng.randrange(spec.primes[i].phi) for i in om)
        e = rng.randint(-emax, emax)
        add_term(d, canonicalize_atom(spec, om, a), e)
        if len(om) == 1:
            b = (rng.randrange(spec.primes[om[0]].phi),)
            add_term(d, canonicalize_atom(spec, om, b), -e)
    return UnitSymbol(spec, d, canonical=True)
