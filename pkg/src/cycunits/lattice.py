"""Integer lattice checks and the floating-point embedding oracle."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import mpmath
import numpy as np
from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form, smith_normal_decomp

from .galois_core import FieldSpec
from .symbols import UnitSymbol, is_unit

DEFAULT_PREC = 256
MAX_PREC = 4096


class PrecisionError(ArithmeticError):
    pass


class IllConditioned(ArithmeticError):
    pass


class NotAUnitQuotient(ValueError):
    pass


# ---- exact side ----

@dataclass(frozen=True)
class SmithResult:
    divisors: tuple
    U: Matrix
    V: Matrix
    D: Matrix


def _as_matrix(M) -> Matrix:
    return M if isinstance(M, Matrix) else Matrix(M)


def smith_normal_form(M) -> SmithResult:
    """Elementary divisors with a certificate U*M*V == D checked exactly."""
    M = _as_matrix(M)
    if M.rows == 0 or M.cols == 0:
        return SmithResult((), Matrix.eye(M.rows), Matrix.eye(M.cols), M)
    D, U, V = smith_normal_decomp(M)
    if U * M * V != D:
        raise AssertionError("SNF certificate failed")
    if abs(U.det()) != 1 or abs(V.det()) != 1:
        raise AssertionError("SNF transforms are not unimodular")
    diag = [abs(int(D[i, i])) for i in range(min(D.rows, D.cols))]
    for i in range(D.rows):
        for j in range(D.cols):
            if i != j and D[i, j] != 0:
                raise AssertionError("SNF is not diagonal")
    nz = [d for d in diag if d]
    for a, b in zip(nz, nz[1:]):
        if b % a:
            raise AssertionError("divisor chain broken")
    return SmithResult(tuple(diag), U, V, D)


def hnf_rows(M) -> Matrix:
    """Canonical basis of the row lattice (column HNF of the transpose)."""
    M = _as_matrix(M)
    return hermite_normal_form(M.T)


def same_lattice(A, B) -> bool:
    return hnf_rows(A) == hnf_rows(B)


@dataclass
class Report:
    check: str
    verdict: bool
    witnesses: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"{self.check}: {'PASS' if self.verdict else 'FAIL'}"


def is_direct_factor(vectors, basis) -> Report:
    """True iff the span of the vectors is a direct summand (all divisors 1)."""
    vectors = list(vectors)
    if not vectors:
        raise ValueError("empty input")
    pos = {b: i for i, b in enumerate(basis)}
    rows = []
    for v in vectors:
        row = [0] * len(basis)
        for b, c in v.items():
            row[pos[b]] = c
        rows.append(row)
    snf = smith_normal_form(rows)
    ok = len(snf.divisors) == len(rows) and all(d == 1 for d in snf.divisors)
    return Report("direct factor", ok, {"divisors": list(snf.divisors), "rank": sum(1 for d in snf.divisors if d)})


def triangularity_report(columns, order_key, exceptions=(), check_pins=True) -> Report:
    """columns: list of (label, pinned_index, vector dict).

    Each column's pinned index must carry +-1 and must be the least pinned
    index (under order_key) present in that column's support.  Columns whose
    label is in exceptions are checked for the +-1 pin only.
    """
    pins = [c[1] for c in columns]
    pinset = set(pins)
    diag, violations, bad_pins = [], [], []
    exceptions = set(exceptions)
    for label, pin, vec in columns:
        if pin is None:
            raise ValueError(f"column {label} has no orderable label")
        d = vec.get(pin, 0)
        diag.append(d)
        if abs(d) != 1:
            bad_pins.append((label, pin, d))
        if label in exceptions:
            continue
        k = order_key(pin)
        for z, c in vec.items():
            if z in pinset and z != pin and order_key(z) < k:
                violations.append((label, pin, z, c))
    ok = not violations and len(pinset) == len(pins) and not (check_pins and bad_pins)
    return Report("triangularity", ok, {"diagonal": diag, "violations": violations,
                                        "bad_pins": bad_pins, "injective": len(pinset) == len(pins),
                                        "exceptions": sorted(map(str, exceptions))})


# ---- numeric side ----

def embedding_residues(n: int) -> list[int]:
    """One residue t per pair of complex-conjugate embeddings."""
    return [t for t in range(1, n // 2 + 1) if gcd(t, n) == 1]


def _atom_value(spec, atom, t):
    m, u = spec.residue(atom.omega, atom.idx)
    return 1 - mpmath.expjpi(mpmath.mpf(2 * ((u * t) % m)) / m)


def symbol_value(x: UnitSymbol, t: int = 1, prec: int = DEFAULT_PREC):
    """Complex value of the fixed representative prod (1 - zeta^u)^e at zeta -> zeta^t."""
    with mpmath.workprec(prec):
        v = mpmath.mpc(1)
        for atom, e in x.terms.items():
            v *= _atom_value(x.spec, atom, t) ** e
        return v


def numeric_embed(x: UnitSymbol, prec: int = DEFAULT_PREC, check_unit: bool = False):
    """log|tau(x)| over embeddings up to conjugation, as mpf values."""
    if check_unit and not is_unit(x):
        raise ValueError("not a unit")
    spec = x.spec
    ts = embedding_residues(spec.n)
    out = []
    with mpmath.workprec(prec):
        floor = mpmath.mpf(2) ** (-prec // 2)
        for t in ts:
            s = mpmath.mpf(0)
            for atom, e in x.terms.items():
                a = abs(_atom_value(spec, atom, t))
                if a < floor:
                    raise PrecisionError("factor too close to zero for the working precision")
                s += e * mpmath.log(a)
            out.append(s)
    return out


def embed_matrix(symbols, prec: int = DEFAULT_PREC) -> np.ndarray:
    return np.array([[float(v) for v in numeric_embed(x, prec)] for x in symbols], dtype=float)


def numeric_rank(vectors, tol: float = 1e-8) -> int:
    A = np.array([[float(v) for v in row] for row in vectors], dtype=float)
    if A.size == 0:
        return 0
    sv = np.linalg.svd(A, compute_uv=False)
    scale = max(1.0, float(sv[0]))
    ranks = {int(np.sum(sv > t * scale)) for t in (tol / 10, tol, tol * 10)}
    if len(ranks) != 1:
        raise IllConditioned(f"rank unstable across tolerance band: {sorted(ranks)}")
    return ranks.pop()


def unit_root_order(n: int) -> int:
    return 2 * n if n % 2 else n


def root_of_unity_quotient(u, v, n: int, tol: float = 1e-6, modulus_tol: float = 1e-8) -> bool:
    if v == 0:
        raise ZeroDivisionError("v = 0")
    z = mpmath.mpc(u) / mpmath.mpc(v)
    if abs(abs(z) - 1) > modulus_tol:
        raise NotAUnitQuotient(f"|u/v| = {mpmath.nstr(abs(z), 10)} is not 1")
    return abs(z ** unit_root_order(n) - 1) < tol


def same_mod_roots_of_unity(x: UnitSymbol, y: UnitSymbol, prec: int = DEFAULT_PREC, tol: float = 1e-6) -> bool:
    """Compare two symbols at every embedding, up to roots of unity of Q(zeta_n)."""
    if x.spec != y.spec:
        raise ValueError("different conductors")
    for t in embedding_residues(x.spec.n):
        try:
            if not root_of_unity_quotient(symbol_value(x, t, prec), symbol_value(y, t, prec), x.spec.n, tol):
                return False
        except NotAUnitQuotient:
            return False
    return True
