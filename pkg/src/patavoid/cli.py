"""Command-line workbench: ``patavoid <command> [flags]``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

from . import __version__
from .catalog import FIGURE1, formulas as catalog_formulas
from .certify import DEFAULT_X_BOUND, load_claims, verify_claim
from .formula import FormulaError, parse_formula
from .morphic import MorphicWordSpec, MorphismError, catalog_names, load_morphism
from .occurrence import divisibility_witness, find_occurrence
from .search import (CONVENTION, DEFAULT_LIMIT, DEFAULT_NODE_BUDGET, BudgetExhausted,
                     ConstraintSet, NotAvoidableError, classify_growth, enumerate_avoiders,
                     essential_avoidance_check)
from .words import Word

OK, FOUND, USAGE, BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _word(text: str, k: int) -> Word:
    try:
        return Word.parse(text, k)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _constraints(args) -> ConstraintSet:
    try:
        return ConstraintSet.build(args.formula or (), [_word(u, args.alphabet) for u in args.forbid or ()],
                                   args.sq)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# -- commands: each returns (exit code, results payload, csv rows) -------------

def cmd_check(args):
    f = parse_formula(args.formula[0])
    w = _word(args.word, args.alphabet)
    if len(w) == 0:
        raise UsageError("--word must be non-empty")
    occ = find_occurrence(w, f)
    res = {"formula": str(f), "word": str(w), "avoids": occ is None,
           "witness": occ.to_json() if occ else None}
    rows = [["formula", "word", "avoids", "witness"],
            [str(f), str(w), occ is None, json.dumps(res["witness"])]]
    return (OK if occ is None else FOUND), res, rows


def cmd_divides(args):
    big, small = parse_formula(args.big), parse_formula(args.small)
    h = divisibility_witness(big, small)
    res = {"big": str(big), "small": str(small), "divisible": h is not None, "morphism": h}
    rows = [["big", "small", "divisible"], [str(big), str(small), h is not None]]
    return (OK if h is not None else FOUND), res, rows


def cmd_enumerate(args):
    c = _constraints(args)
    t = enumerate_avoiders(c, args.alphabet, args.limit, node_budget=args.node_budget,
                           threads=args.threads)
    res = t.to_json()
    rows = [["length", "count"]] + [[n, cnt] for n, cnt in sorted(t.counts.items())]
    return (BUDGET if t.status == "budget exhausted" else OK), res, rows


def cmd_classify(args):
    f = parse_formula(args.formula[0])
    v = classify_growth(f, args.alphabet, args.limit or 30, node_budget=args.node_budget)
    res = {"formula": str(f), **v.to_json()}
    rows = [["formula", "label", "mean_ratio", "diff_growth"],
            [str(f), v.label, f"{v.ratio:.6f}", f"{v.diff_growth:.6f}"]]
    return OK, res, rows


def cmd_figure1(args):
    out, rows, code = [], [["formula", "max_length", "count"]], OK
    for text, length, count in FIGURE1:
        t = enumerate_avoiders(text, 2, args.limit or DEFAULT_LIMIT, node_budget=args.node_budget,
                               threads=args.threads)
        if t.status == "budget exhausted":
            code = BUDGET
        match = t.max_length == length and t.total == count
        if not match and code == OK:
            code = FOUND
        out.append({"formula": text, "max_length": t.max_length, "count": t.total,
                    "expected": [length, count], "match": match,
                    "witness_longest": str(t.witness_longest)})
        rows.append([text, t.max_length, t.total])
    return code, {"rows": out, "all_match": all(r["match"] for r in out)}, rows


def cmd_morphic(args):
    spec = MorphicWordSpec.parse(args.name)
    w = spec.prefix(args.length)
    res = {"name": spec.name, "length": args.length, "prefix": str(w)}
    return OK, res, [["name", "length", "prefix"], [spec.name, args.length, str(w)]]


def cmd_image(args):
    g = load_morphism(args.morphism)
    w = _word(args.word, g.domain_size)
    img = g.apply(w)
    res = {"morphism": g.name, "word": str(w), "image": str(img), "length": len(img)}
    return OK, res, [["morphism", "word", "image"], [g.name, str(w), str(img)]]


def cmd_verify(args):
    if args.claims:
        jobs = [(c.morphism, c.formula, c.t, c.reverse) for c in load_claims()]
    else:
        if not (args.morphism and args.formula and args.sq):
            raise UsageError("verify needs --morphism, --formula and --sq (or --claims)")
        jobs = [(args.morphism, parse_formula(args.formula[0]), args.sq, args.reverse)]
    results = [verify_claim(m, f, t, rev, x_bound=args.x_bound) for m, f, t, rev in jobs]
    payload = [r.to_json() for r in results]
    rows = [["morphism", "formula", "t", "reverse", "verdict"]]
    rows += [[p["morphism"], p["formula"], p["t"], p["reverse"], p["verdict"]] for p in payload]
    code = FOUND if any(r.verdict == "refuted" for r in results) else OK
    return code, {"claims": payload}, rows


def cmd_essential(args):
    if not args.generator:
        raise UsageError("essential needs at least one --generator")
    c = _constraints(args)
    n = args.length or 20
    m = args.margin if args.margin is not None else 20
    r = essential_avoidance_check(args.generator, c, n, m, k=args.alphabet,
                                  node_budget=args.node_budget)
    res = {"generators": args.generator, "constraints": c.describe(), **r.to_json()}
    rows = [["generators", "constraints", "n", "m", "passed"],
            [" ".join(args.generator), c.describe(), n, m, r.passed]]
    return (OK if r.passed else FOUND), res, rows


def cmd_catalog(args):
    fs = [e.to_json() for e in catalog_formulas()]
    ms = []
    for name in catalog_names():
        g = load_morphism(name)
        ms.append({"name": name, "domain": g.domain_size, "codomain": g.codomain.size,
                   "width": g.width})
    claims = [{"morphism": c.morphism, "formula": str(c.formula), "t": c.t, "reverse": c.reverse}
              for c in load_claims()]
    rows = [["formula", "lambda", "growth", "list"]]
    rows += [[e["formula"], e["lambda"], e["growth"], e["list"]] for e in fs]
    return OK, {"formulas": fs, "morphisms": ms, "claims": claims}, rows


COMMANDS = {
    "check": cmd_check, "divides": cmd_divides, "enumerate": cmd_enumerate,
    "classify": cmd_classify, "figure1": cmd_figure1, "morphic": cmd_morphic,
    "image": cmd_image, "verify": cmd_verify, "essential": cmd_essential, "catalog": cmd_catalog,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--alphabet", type=int, default=2)
    common.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)
    common.add_argument("--threads", type=int, default=1)

    cons = argparse.ArgumentParser(add_help=False)
    cons.add_argument("--formula", action="append")
    cons.add_argument("--forbid", action="append", default=[])
    cons.add_argument("--sq", type=int)

    p = argparse.ArgumentParser(prog="patavoid", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[common])
    s.add_argument("--formula", action="append", required=True)
    s.add_argument("--word", required=True)
    s = sub.add_parser("divides", parents=[common])
    s.add_argument("--big", required=True)
    s.add_argument("--small", required=True)
    s = sub.add_parser("enumerate", parents=[common, cons])
    s.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
    s = sub.add_parser("classify", parents=[common])
    s.add_argument("--formula", action="append", required=True)
    s.add_argument("--limit", type=int, default=30)
    s = sub.add_parser("figure1", parents=[common])
    s.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
    s = sub.add_parser("morphic", parents=[common])
    s.add_argument("--name", required=True)
    s.add_argument("--length", type=int, required=True)
    s = sub.add_parser("image", parents=[common])
    s.add_argument("--morphism", required=True)
    s.add_argument("--word", required=True)
    s = sub.add_parser("verify", parents=[common])
    s.add_argument("--morphism")
    s.add_argument("--formula", action="append")
    s.add_argument("--sq", type=int)
    s.add_argument("--reverse", action="store_true")
    s.add_argument("--claims", action="store_true", help="verify every catalog claim")
    s.add_argument("--x-bound", type=int, default=DEFAULT_X_BOUND)
    s = sub.add_parser("essential", parents=[common, cons])
    s.add_argument("--generator", action="append")
    s.add_argument("--length", type=int)
    s.add_argument("--margin", type=int)
    sub.add_parser("catalog", parents=[common])
    return p


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        code, results, rows = COMMANDS[args.command](args)
    except (UsageError, FormulaError, MorphismError) as exc:
        print(f"patavoid {args.command}: {exc}", file=sys.stderr)
        return USAGE
    except NotAvoidableError as exc:
        print(f"patavoid {args.command}: {exc}", file=sys.stderr)
        return FOUND
    except BudgetExhausted as exc:
        print(f"patavoid {args.command}: {exc}", file=sys.stderr)
        return BUDGET
    params = {k: v for k, v in vars(args).items() if k not in ("command", "format")}
    report = {"command": args.command, "parameters": params, "results": results,
              "version": __version__, "convention": CONVENTION,
              "wall_time": round(time.perf_counter() - start, 3)}
    if args.format == "csv":
        sys.stdout.write(_csv(rows))
    else:
        json.dump(report, sys.stdout, indent=2)
        sys.stdout.write("\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
