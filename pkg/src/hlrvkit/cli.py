"""Command-line interface: ``python -m hlrvkit <command> ...``.

Exit codes: 0 success, 2 a validation check failed, 1 usage or internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from math import factorial
from typing import List, Optional, Sequence

import sympy

from . import __version__
from .braidwalk import BraidWord, admissible, enumerate_walks
from .charvar import (CharVarSpec, SpecError, cell_decomposition, dimension, duality_check,
                      hlrv, motive_sum, specialize)
from .checks import run_checks
from .exact import MPoly, RatFunc
from .macdonald import macdonald_table
from .partitions import partitions_of

EXIT_OK, EXIT_ERROR, EXIT_VALIDATION = 0, 1, 2
MAX_TAU_VECTORS = 10 ** 4   # |W|^{2g} cap for cell enumeration at positive genus


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


# -- formatting ---------------------------------------------------------------

def format_grid_order(poly: MPoly) -> str:
    """Terms ordered by j − i, then by total degree: 'z^2 + 4 + w^2'."""
    if not poly.terms:
        return "0"
    vars = poly.vars
    rows = []
    for e, c in poly.terms.items():
        ex = dict(zip(vars, e))
        i, j = ex.get("z", 0), ex.get("w", 0)
        rows.append(((j - i, -(i + j)), (i, j), c))
    rows.sort()
    return _join_terms([(("z", i), ("w", j), c) for _, (i, j), c in rows])


def format_z_major(poly: MPoly) -> str:
    """Terms ordered by descending z-degree, then ascending w-degree: 'z - w'."""
    vars = poly.vars
    rows = []
    for e, c in poly.terms.items():
        ex = dict(zip(vars, e))
        rows.append(((-ex.get("z", 0), ex.get("w", 0)), (ex.get("z", 0), ex.get("w", 0)), c))
    rows.sort()
    return _join_terms([(("z", i), ("w", j), c) for _, (i, j), c in rows])


def _join_terms(rows) -> str:
    out = []
    for (x, i), (y, j), c in rows:
        mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in ((x, i), (y, j)) if k)
        a = abs(c)
        body = mono if mono and a == 1 else (f"{a}*{mono}" if mono else str(a))
        sign = "-" if c < 0 else "+"
        out.append((sign, body))
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


def _to_sympy(poly: MPoly):
    zs, ws = sympy.symbols("z w")
    table = {"z": zs, "w": ws}
    return sum((c * sympy.Mul(*[table[v] ** k for v, k in zip(poly.vars, e)])
                for e, c in poly.terms.items()), sympy.Integer(0))


def _from_sympy(expr) -> MPoly:
    zs, ws = sympy.symbols("z w")
    p = sympy.Poly(expr, zs, ws)
    return MPoly(("z", "w"), {tuple(m): int(c) for m, c in zip(p.monoms(), p.coeffs())})


def factored(value: RatFunc) -> str:
    """Factored display of a (z,w) rational function, e.g. '(z - w)^2'."""
    def side(poly: MPoly) -> str:
        const, factors = sympy.factor_list(_to_sympy(poly))
        pieces = []
        sign = 1
        for f, e in factors:
            fp = _from_sympy(f)
            lead = max(fp.terms.items(), key=lambda kv: (kv[0][0] if fp.vars[0] == "z" else 0, -kv[0][-1]))
            if lead[1] < 0:
                fp = -fp
                sign *= (-1) ** e
            s = format_z_major(fp)
            if e > 1 or len(factors) > 1 or const * sign != 1:
                s = s if len(fp.terms) == 1 else f"({s})"
            pieces.append(s if e == 1 else f"{s}^{e}")
        const = sympy.Integer(const) * sign
        head = [] if const == 1 and pieces else [str(const)] if const != -1 or not pieces else ["-"]
        if head == ["-"]:
            return "-" + "*".join(pieces)
        return "*".join(head + pieces)
    num = side(value.num)
    if value.den.is_const() and value.den.const_value() == 1:
        return num
    return f"{num} / ({side(value.den)})"


# -- argument handling --------------------------------------------------------

def parse_spec(args) -> CharVarSpec:
    if args.mu is None:
        raise UsageError("--mu is required, e.g. --mu \"1,1;1,1;1,1;1,1\"")
    try:
        return CharVarSpec.parse(args.g, args.mu)
    except SpecError as exc:
        raise UsageError(str(exc)) from exc


def _warm_cache(n: int, args) -> None:
    for m in range(1, n + 1):
        macdonald_table(m, args.cache_dir, args.jobs)


def _emit(args, text_lines: Sequence[str], payload: dict) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print("\n".join(text_lines))


def _poly_str(p: MPoly) -> str:
    return str(p) if p.terms else "0"


# -- commands -----------------------------------------------------------------

def cmd_hlrv(args) -> int:
    spec = parse_spec(args)
    N = args.truncation if args.truncation is not None else spec.n
    if N < spec.n:
        raise UsageError(f"--truncation must be at least n = {spec.n}")
    _warm_cache(N, args)
    res = hlrv(spec, truncation=N, cache_dir=args.cache_dir)
    lines = [f"type: {spec.label()}  (k={spec.k}, n={spec.n}, d={res.d})"]
    payload = {"spec": spec.to_json(), "d": res.d, "truncation": N,
               "hlrv": str(res.value), "hlrv_neg_z": str(res.value_neg)}
    if res.grid is not None:
        g = res.grid
        Wqt, E = specialize(g, "weight"), specialize(g, "E")
        pure, poin = specialize(g, "pure"), specialize(g, "poincare")
        mot = motive_sum(g)
        dual = duality_check(g)
        lines += [
            f"H(-z,w) = {format_grid_order(g.as_poly())}",
            f"H(z,w)  = {format_grid_order(res.value.to_poly())} = {factored(res.value)}",
            "grid c[i,j] of H(-z,w): " + ", ".join(f"c[{i},{j}]={v}" for (i, j), v in sorted(g.c.items())),
            f"W(q,t) = {_poly_str(Wqt)}   (conjectural mixed Hodge polynomial)",
            f"E(q) = W(q,-1) = {_poly_str(E)}",
            f"pure part W(q,0) = {_poly_str(pure)}   (conjectural)",
            f"Poincaré P(t) = W(t^2,t) = {_poly_str(poin)}",
            f"motive: {mot}   (conjectural)",
            f"curious Poincaré duality c[i,j] = c[j,i]: {'holds' if dual else 'FAILS'}",
        ]
        payload.update({"grid": g.to_json(), "weight_poly": str(Wqt), "e_poly": str(E),
                        "pure_part": str(pure), "poincare": str(poin),
                        "motive": mot.to_json(), "motive_text": str(mot), "duality": dual})
    else:
        payload.update({"grid": None, "weight_poly": None, "e_poly": None, "motive": None})
    payload["problems"] = res.problems
    if res.problems:
        lines.append("validation: FAILED")
        lines += [f"  - {p}" for p in res.problems]
    else:
        lines.append("validation: ok")
    _emit(args, lines, payload)
    return EXIT_OK if res.ok and payload.get("duality", False) else EXIT_VALIDATION


def cmd_cells(args) -> int:
    spec = parse_spec(args)
    if not spec.very_generic:
        raise UsageError("cell decompositions require a very generic type: the last puncture "
                         "C_k must be regular semisimple, i.e. its partition must be 1,1,...,1")
    if factorial(spec.n) ** (2 * spec.g) > MAX_TAU_VECTORS:
        raise UsageError(f"genus {spec.g} with n = {spec.n} needs {factorial(spec.n)}^{2 * spec.g} "
                         f"genus vectors; the cap is {MAX_TAU_VECTORS}")
    dec = cell_decomposition(spec)
    _warm_cache(spec.n, args)
    res = hlrv(spec, cache_dir=args.cache_dir)
    cell_E = dec.e_polynomial()
    hlrv_E = specialize(res.grid, "E") if res.grid is not None else None
    agree = hlrv_E is not None and hlrv_E == cell_E
    lines = [f"type: {spec.label()}  (k={spec.k}, n={spec.n}, d={dec.d}, very generic)",
             f"{'#':>3}  {'w-vector':<28} {'stay set S_p':<24} {'a':>2} {'b':>2}  cell"]
    for idx, c in enumerate(dec.cells, start=1):
        wv = "(" + ", ".join(p.label() for p in c.taus + c.ws) + ")"
        stays = "{" + ",".join(map(str, sorted(c.walk.stay))) + "}"
        lines.append(f"{idx:>3}  {wv:<28} {stays:<24} {c.a_bar:>2} {c.b_bar:>2}  {c.label()}")
    lines += [f"f = {dec.f}",
              f"summary: {dec.summary()}   [{dec.compact_summary()}]",
              f"         {dec.summary(unicode=True)}",
              f"E-polynomial: cells {_poly_str(cell_E)}; HLRV {hlrv_E if hlrv_E is not None else 'n/a'}: "
              f"{'agree' if agree else 'DISAGREE'}"]
    payload = dec.to_json()
    payload.update({"compact_summary": dec.compact_summary(), "e_poly_cells": str(cell_E),
                    "e_poly_hlrv": str(hlrv_E) if hlrv_E is not None else None,
                    "cross_check": agree})
    _emit(args, lines, payload)
    return EXIT_OK if agree else EXIT_VALIDATION


def cmd_walks(args) -> int:
    try:
        word = [int(x) for x in args.word.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse --word {args.word!r}") from exc
    n = args.n if args.n is not None else (max(word) + 1 if word else 2)
    if args.product_order:
        beta = BraidWord.from_product(n, word)
    else:
        beta = BraidWord(n, word)
    walks = enumerate_walks(beta)
    lines = [f"braid {beta.product_string() or '(empty)'} on {n} strands, "
             f"walk-order letters {list(beta.letters)}: {len(walks)} walks",
             "states listed p_0, ..., p_l"]
    records = []
    for p in walks:
        adm = admissible(p, 0, n)
        lines.append(f"  ({', '.join(p.labels())})  U={sorted(p.up)} S={sorted(p.stay)} "
                     f"D={sorted(p.down)}{'  admissible (g=0)' if adm else ''}")
        rec = p.to_json()
        rec["labels"] = list(p.labels())
        rec["admissible_g0"] = adm
        records.append(rec)
    _emit(args, lines, {"n": n, "letters": list(beta.letters), "walks": records})
    return EXIT_OK


def cmd_macdonald(args) -> int:
    if args.n is None or args.n < 1:
        raise UsageError("--n must be a positive integer")
    lines, payload = [], {"n": args.n, "tables": []}
    for m in range(1, args.n + 1):
        table = macdonald_table(m, args.cache_dir, args.jobs)
        lams = partitions_of(m)
        for mu in lams:
            K = table[mu].Htilde_in_s
            expansion = " + ".join(
                (f"s{list(lam)}" if str(K[lam]) == "1" else
                 f"({K[lam]})*s{list(lam)}" if len(K[lam].terms) > 1 else f"{K[lam]}*s{list(lam)}")
                for lam in lams if lam in K)
            lines.append(f"H~{list(mu)} = {expansion}")
        payload["tables"].append({"n": m, "entries": [table[mu].to_json() for mu in lams]})
    _emit(args, lines, payload)
    return EXIT_OK


def cmd_check(args) -> int:
    results = run_checks(args.seed)
    lines = [f"invariant suite, seed {args.seed}"]
    for r in results:
        lines.append(f"  [{'PASS' if r.ok else 'FAIL'}] {r.name}" + (f": {r.detail}" if r.detail and not r.ok else ""))
    ok = all(r.ok for r in results)
    lines.append("all checks passed" if ok else "some checks FAILED")
    _emit(args, lines, {"seed": args.seed, "results": [r.__dict__ for r in results], "ok": ok})
    return EXIT_OK if ok else EXIT_VALIDATION


# -- entry point --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--g", type=int, default=0, help="genus (default 0)")
    common.add_argument("--mu", help='type: punctures separated by ";", parts by ",", e.g. "1,1;1,1;2"')
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--cache-dir", default=None,
                        help="Macdonald cache directory (default: $HLRVKIT_CACHE_DIR, else memory only)")
    common.add_argument("--truncation", type=int, default=None, help="degree truncation N (default n)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for Macdonald tables")
    common.add_argument("--seed", type=int, default=0, help="random seed for the check suite")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="hlrvkit", description="HLRV functions and cell decompositions "
                     "of generic character varieties, in exact arithmetic.")
    parser.add_argument("--version", action="version", version=f"hlrvkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("hlrv", parents=[common], help="HLRV function, grid and specializations")
    sub.add_parser("cells", parents=[common], help="cell decomposition of a very generic type")
    p = sub.add_parser("walks", parents=[common], help="walks of a positive braid word")
    p.add_argument("--word", required=True, help="comma-separated letters i_1,...,i_l in walk order")
    p.add_argument("--n", type=int, default=None, help="number of strands (default max letter + 1)")
    p.add_argument("--product-order", action="store_true",
                   help="read --word as the left-to-right product instead of walk order")
    p = sub.add_parser("macdonald", parents=[common], help="modified Macdonald / (q,t)-Kostka tables")
    p.add_argument("--n", type=int, required=True)
    sub.add_parser("check", parents=[common], help="run the seeded invariant suite")
    return parser


COMMANDS = {"hlrv": cmd_hlrv, "cells": cmd_cells, "walks": cmd_walks,
            "macdonald": cmd_macdonald, "check": cmd_check}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"hlrvkit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as exc:   # internal error: report and exit 1
        logging.getLogger(__name__).debug("internal error", exc_info=True)
        print(f"hlrvkit {args.command}: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
