"""Command line: cycunits <command> [options].

Exit codes: 0 all checks pass, 1 a check failed, 2 bad input, 3 precision trouble.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import __version__
from .convolution import lemma7_check
from .deployed import SpecError, exception_class, validate_spec, verify
from .galois_core import ConductorError, GaloisElement, factorize_conductor
from .goldkim import GKIndex, NonUnitError, basis_symbol, format_vector, gold_kim
from .lattice import (DEFAULT_PREC, PrecisionError, embed_matrix, numeric_embed, numeric_rank,
                      same_mod_roots_of_unity, smith_normal_form)
from .realplus import expected_real_divisors, hasse_order, real_basis
from .sampling import random_unit
from .symbols import UnitSymbol, format_symbol, galois_act, parse_symbol

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_PRECISION = 0, 1, 2, 3
DEFAULT_SUITE = (9, 12, 15, 20, 21, 35, 45)


class InputError(ValueError):
    pass


def _ints(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"expected comma separated integers, got {text!r}") from None


def _spec(n):
    try:
        return factorize_conductor(n)
    except ConductorError as e:
        raise InputError(str(e)) from None


def basis_to_json(spec, basis) -> dict:
    return {"n": spec.n, "primes": [P.q for P in spec.primes],
            "basis": [{"omega": [i + 1 for i in b.omega], "tuple": list(b.a), "kind": b.kind} for b in basis]}


def basis_from_json(doc) -> list:
    return [GKIndex(tuple(i - 1 for i in e["omega"]), tuple(e["tuple"])) for e in doc["basis"]]


def vector_to_json(vec) -> list:
    return [{"omega": [i + 1 for i in b.omega], "tuple": list(b.a), "coeff": c}
            for b, c in sorted(vec.items(), key=lambda t: (-len(t[0].omega), t[0].omega, t[0].a[::-1]))]


def vector_from_json(doc) -> dict:
    return {GKIndex(tuple(i - 1 for i in e["omega"]), tuple(e["tuple"])): e["coeff"] for e in doc}


def _residual(spec, x, vec, prec):
    """max |log|x| - sum v_b log|b|| over embeddings."""
    ex = numeric_embed(x, prec)
    total = [0] * len(ex)
    for b, c in vec.items():
        for i, v in enumerate(numeric_embed(basis_symbol(spec, b), prec)):
            total[i] += c * v
    return max((abs(float(a - b)) for a, b in zip(ex, total)), default=0.0)


# ---- commands; each returns (doc, human_lines, exit_code) ----

def cmd_gk_basis(args):
    spec = _spec(args.n)
    G = gold_kim(spec)
    expected = spec.phi // 2 - 1
    doc = basis_to_json(spec, G.basis)
    doc["count"] = len(G.basis)
    doc["expected"] = expected
    lines = [f"Gold-Kim basis of Q(zeta_{spec.n}), prime powers {[P.q for P in spec.primes]}"]
    lines += [f"  {i + 1:4d}  {b.label()}" for i, b in enumerate(G.basis)]
    lines.append(f"count {len(G.basis)} (expected phi(n)/2-1 = {expected})")
    return doc, lines, EXIT_OK if len(G.basis) == expected else EXIT_FAIL


def cmd_decompose(args):
    spec = _spec(args.n)
    try:
        x = parse_symbol(args.symbol, spec)
    except ValueError as e:
        raise InputError(f"parse error: {e}") from None
    G = gold_kim(spec)
    try:
        vec = G.decompose(x)
    except NonUnitError as e:
        raise InputError(f"non-unit: {e}") from None
    res = _residual(spec, x, vec, args.prec)
    same = same_mod_roots_of_unity(x, G.reconstruct(vec), args.prec)
    ok = res < 1e-8 and same
    doc = {"n": spec.n, "symbol": format_symbol(x), "coordinates": vector_to_json(vec),
           "residual": res, "root_of_unity_check": same}
    lines = [f"{format_symbol(x)} =", "  " + (format_vector(vec) or "(identity)"),
             f"log residual {res:.3e}; quotient is a root of unity: {same}"]
    return doc, lines, EXIT_OK if ok else EXIT_FAIL


def _deployed_report(n, degrees, sel, checks):
    sub = validate_spec(n, degrees, sel)
    rep = verify(sub, checks)
    inv = sub.perm
    gens = []
    for g, v in zip(rep.generators, rep.vectors):
        gens.append({"level": [sub.factors[i].q for i in g.omega], "class": str(g.kclass), "tuple": list(g.a),
                     "corresponds": g.corr.label(), "pinned": v.get(g.corr, 0),
                     "exception_class": exception_class(sub, g), "symbol": format_symbol(g.symbol)})
    doc = {"n": n, "degrees": list(degrees), "internal_order": [f.q for f in sub.factors],
           "input_position_of_internal": [i + 1 for i in inv], "real": list(sub.real),
           "experimental": sub.experimental, "generators": gens,
           "checks": [{"check": c.check, "verdict": c.verdict, "witnesses": _jsonable(c.witnesses)}
                      for c in rep.checks]}
    lines = [f"deployed field n={n} degrees={list(degrees)}: {sub.describe()}"]
    if sub.experimental:
        lines.append("  note: 2-power conductor above 8, construction is experimental")
    lines.append(f"  internal order (real first): {[f.q for f in sub.factors]}")
    for e in gens:
        tag = "  [k=t-1 class]" if e["exception_class"] else ""
        lines.append(f"  level {e['level']} class {e['class']} tuple {tuple(e['tuple'])} -> {e['corresponds']}"
                     f" pinned {e['pinned']}{tag}")
    for c in rep.checks:
        extra = ""
        if "divisors" in c.witnesses:
            extra = f" divisors {c.witnesses['divisors']}"
        elif "count" in c.witnesses:
            extra = f" {c.witnesses['count']} of {c.witnesses['expected']}"
        lines.append(f"  [{_TAGS.get(c.check, 'check')}] {c.line()}{extra}")
    return doc, lines, EXIT_OK if rep.ok else EXIT_FAIL


_TAGS = {"cardinality": "rank count", "direct factor": "direct-factor", "pinned +-1 and injective": "correspondence",
         "triangularity": "triangular", "Was(K) = Z Was(K+)": "one-non-real corollary"}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (int, float, str, bool)) or x is None:
        return x
    return str(x)


def cmd_deployed(args):
    degrees = _ints(args.degrees)
    checks = ("count", "snf", "pin", "triangular", "corollary") if args.verify == "all" else tuple(
        c.strip() for c in args.verify.split(","))
    try:
        return _deployed_report(args.n, degrees, args.two_subgroup, checks)
    except (SpecError, ConductorError) as e:
        raise InputError(str(e)) from None


def _real_report(spec, prec, multiplier="auto"):
    gens = real_basis(spec, multiplier)
    G = gold_kim(spec)
    expected = spec.phi // 2 - 1
    rows = [G.dense(g.image()) for g in gens]
    divs = tuple(smith_normal_form(rows).divisors) if rows else ()
    rank = numeric_rank(embed_matrix([g.symbol() for g in gens], prec)) if gens else 0
    checks = {"count": len(gens) == expected, "numeric rank": rank == expected,
              "snf": divs == expected_real_divisors(spec)}
    return gens, divs, rank, checks


def cmd_real_basis(args):
    spec = _spec(args.n)
    gens, divs, rank, checks = _real_report(spec, args.prec, args.multiplier)
    doc = {"n": spec.n, "generators": [{"type": g.kind, "x": g.label.label(),
                                        "parts": [format_symbol(p) for p in g.parts],
                                        "gk_image": vector_to_json(g.image())} for g in gens],
           "snf": list(divs), "numeric_rank": rank, "checks": checks}
    lines = [f"real cyclotomic units of Q(zeta_{spec.n})+: {len(gens)} generators"]
    for g in gens:
        shape = "|x|" if g.kind < 2 else "|x_1||x|"
        lines.append(f"  type {g.kind}  {shape:9s} x = {g.label.label()}")
    lines.append(f"  Gold-Kim projection SNF {list(divs)}; numeric rank {rank}")
    for k, v in checks.items():
        lines.append(f"  [real-plus] {k}: {'PASS' if v else 'FAIL'}")
    return doc, lines, EXIT_OK if all(checks.values()) else EXIT_FAIL


def cmd_lemma7(args):
    d = _ints(args.d)
    try:
        rep = lemma7_check(d)
    except ValueError as e:
        raise InputError(str(e)) from None
    doc = {"d": d, "sum_f_C": str(rep.sum_f_c), "g_C_minus_1": str(rep.g_c_minus_1),
           "sum_f_R": str(rep.sum_f_r), "g_R_minus_1": str(rep.g_r_minus_1),
           "pointwise_mobius": rep.mobius_c and rep.mobius_r, "ok": rep.ok}
    lines = [f"d = {d}",
             f"  complex count: sum f_C = {rep.sum_f_c} = {rep.g_c_minus_1} = g_C - 1: {rep.sum_f_c == rep.g_c_minus_1}",
             f"  real count:    sum f_R = {rep.sum_f_r} = {rep.g_r_minus_1} = g_R - 1: {rep.sum_f_r == rep.g_r_minus_1}",
             f"  f = mu * g pointwise: {rep.mobius_c and rep.mobius_r}"]
    return doc, lines, EXIT_OK if rep.ok else EXIT_FAIL


def suite_item(n, prec=DEFAULT_PREC, samples=20, seed=0):
    spec = _spec(n)
    G = gold_kim(spec)
    res = {}
    res["gk count"] = len(G.basis) == spec.phi // 2 - 1
    res["basis round trip"] = all(G.decompose(basis_symbol(spec, b)) == {b: 1} for b in G.basis)
    rng = random.Random(seed)
    ok = True
    for _ in range(samples):
        x = random_unit(spec, rng)
        ok &= same_mod_roots_of_unity(x, G.reconstruct(G.decompose(x)), prec)
    res["decomposition soundness"] = bool(ok)
    gens = [GaloisElement.sigma(spec, j) for j in range(spec.r)]
    res["galois closure"] = all(isinstance(c, int) for g in gens for b in G.basis
                                for c in G.decompose(galois_act(g, basis_symbol(spec, b))).values())
    _, _, _, rc = _real_report(spec, prec)
    res.update({f"real-plus {k}": v for k, v in rc.items()})
    full = tuple(range(spec.r))
    if spec.r >= 2:
        res["hasse 1-zeta_n"] = hasse_order(UnitSymbol.atom(spec, full, (0,) * spec.r)) == 2
    else:
        res["hasse xi"] = all(hasse_order(basis_symbol(spec, b)) == 1 for b in G.basis)
    return res


def cmd_verify(args):
    ns = DEFAULT_SUITE if args.suite == "default" else tuple(_ints(args.suite))
    doc, lines, ok = {"suite": list(ns), "results": {}}, [], True
    for n in ns:
        r = suite_item(n, args.prec, args.samples)
        doc["results"][str(n)] = r
        good = all(r.values())
        ok &= good
        lines.append(f"n={n:4d}  {'PASS' if good else 'FAIL'}  " + ", ".join(
            f"{k}={'ok' if v else 'FAIL'}" for k, v in r.items()))
    lines.append(f"suite {'PASS' if ok else 'FAIL'}")
    return doc, lines, EXIT_OK if ok else EXIT_FAIL


def build_parser():
    ap = argparse.ArgumentParser(prog="cycunits", description="Explicit bases of cyclotomic unit groups.")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--format", choices=("human", "json"), default="human")
    ap.add_argument("--prec", type=int, default=int(os.environ.get("CYCUNITS_PREC", DEFAULT_PREC)),
                    help="working precision in bits for numeric checks")
    sp = ap.add_subparsers(dest="command", required=True)

    p = sp.add_parser("gk-basis", help="list the Gold-Kim basis")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_gk_basis)

    p = sp.add_parser("decompose", help="coordinates of a unit symbol in the Gold-Kim basis")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--symbol", required=True, help="e.g. '(1,2;0,1)^1 * (2;1)^-1' (1-based primes)")
    p.set_defaults(func=cmd_decompose)

    p = sp.add_parser("deployed", help="basis of a totally deployed subfield")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--degrees", required=True, help="per-prime degrees, ascending primes, e.g. 2,6")
    p.add_argument("--two-subgroup", default=None, help="at p=2: plus, minus, or generating residues")
    p.add_argument("--verify", default="all", help="all or a subset of count,snf,pin,triangular,corollary")
    p.set_defaults(func=cmd_deployed)

    p = sp.add_parser("real-basis", help="basis of the real cyclotomic units")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--multiplier", choices=("auto", "literal", "gk"), default="auto",
                   help="literal: always 1-zeta_n^sigma_1 (degenerate for some n)")
    p.set_defaults(func=cmd_real_basis)

    p = sp.add_parser("lemma7", help="check the block counting identities")
    p.add_argument("--d", required=True)
    p.set_defaults(func=cmd_lemma7)

    p = sp.add_parser("verify", help="run the verification suite")
    p.add_argument("--suite", default="default", help="'default' or a comma list of conductors")
    p.add_argument("--samples", type=int, default=20)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        doc, lines, code = args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except PrecisionError as e:
        print(f"precision error: {e}", file=sys.stderr)
        return EXIT_PRECISION
    if args.format == "json":
        doc["exit_code"] = code
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
