"""Command-line entry point: ``posetpack <subcommand> ...``.

Exit codes: 0 success, 2 input error, 3 cap/budget exceeded, 4 verification
failure. Big integers are written as decimal strings.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .config import RunConfig
from .embedding import best_ratio, minimal_closure
from .errors import ParseError, PosetpackError
from .lattice import (
    Family,
    abar_bruteforce,
    chains_through,
    chains_through_oracle,
    closure,
    elements_of,
    family_from_json,
    is_convex,
    mask_of,
    related_pair,
)
from .oracle import enumerate_copies, gst_formula, pa_collection_witness, pa_exact
from .packing import (
    Copy,
    asymptotic_target,
    build_plan,
    copies_in_layer,
    count_copies,
    materialize,
    partial_target,
    verify_unrelated,
)
from .poset import load_poset
from . import selftest

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_VERIFY = 0, 2, 3, 4


def ratio_json(r: Fraction) -> dict:
    return {"fraction": f"{r.numerator}/{r.denominator}", "decimal": f"{float(r):.6g}"}


def _mode(args) -> str:
    return "strong" if getattr(args, "strong", False) else "weak"


def _read_json(path: str):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc.msg}", exc.lineno, exc.colno) from None


def _family(path: str) -> Family:
    return family_from_json(_read_json(path))


def cmd_closure(args, cfg):
    f = _family(args.family)
    c = closure(f, cfg)
    doc = c.to_json()
    doc["convex"] = len(c) == len(f)
    return doc, EXIT_OK


def cmd_convex(args, cfg):
    return {"convex": is_convex(_family(args.family), cfg)}, EXIT_OK


def cmd_unrelated(args, cfg):
    f1, f2 = _family(args.first), _family(args.second)
    hit = related_pair(f1, f2)
    doc = {"unrelated": hit is None}
    if hit:
        a, b, direction = hit
        doc["witness"] = {"sets": [elements_of(a), elements_of(b)], "direction": direction}
    return doc, EXIT_OK


def cmd_chains(args, cfg):
    f = _family(args.family)
    count = chains_through(f, cfg)
    doc = {"n": f.n, "chains": str(count)}
    code = EXIT_OK
    if args.oracle:
        check = chains_through_oracle(f, cfg)
        doc["oracle"] = str(check)
        doc["agree"] = check == count
        code = EXIT_OK if check == count else EXIT_VERIFY
    return doc, code


def cmd_abar(args, cfg):
    value, witness = abar_bruteforce(args.m, args.n, cfg)
    return {"m": args.m, "n": args.n, "abar": str(value), "witness": witness.to_json()}, EXIT_OK


def cmd_cp(args, cfg):
    cert = minimal_closure(load_poset(args.poset), _mode(args), args.kmax, cfg)
    return cert.to_json(), EXIT_OK


def _plan(args, cfg):
    p = load_poset(args.poset)
    cert = minimal_closure(p, _mode(args), args.kmax, cfg)
    return cert, build_plan(cert.witness, args.n, args.iters, cfg)


def cmd_construct(args, cfg):
    cert, plan = _plan(args, cfg)
    copies, size = count_copies(plan)
    summary = {
        "m": cert.m,
        "k": cert.k,
        "layers": [lay.to_json() for lay in plan.layers],
        "copies": str(copies),
        "family_size": str(size),
    }
    if args.count_only:
        return summary, EXIT_OK
    placed = [c.to_json() for c in materialize(plan, cfg)]
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(placed, fh)
        summary["out"] = args.out
        return summary, EXIT_OK
    return placed, EXIT_OK


def copies_from_json(doc) -> list[Copy | Family]:
    if not isinstance(doc, list):
        raise ParseError("copies file must be a JSON list of families")
    out = []
    for item in doc:
        fam = family_from_json(item)
        if isinstance(item, dict) and "elements" in item:
            out.append(Copy(fam.n, tuple(mask_of(s) for s in item["elements"])))
        else:
            out.append(fam)
    return out


def cmd_verify(args, cfg):
    copies = copies_from_json(_read_json(args.copies))
    pattern = None
    if copies and all(isinstance(c, Copy) for c in copies):
        pattern = copies[0].sets
    report = verify_unrelated(copies, pattern)
    return report.to_json(), EXIT_OK if report.ok else EXIT_VERIFY


def cmd_oracle_pa(args, cfg):
    p = load_poset(args.poset)
    value, witness = pa_exact(p, args.n, _mode(args), cfg)
    catalog = enumerate_copies(p, args.n, _mode(args), cfg)
    return {
        "pa": str(value),
        "n": args.n,
        "mode": _mode(args),
        "catalog_size": len(catalog),
        "witness": [f.to_json() for f in witness],
    }, EXIT_OK


def cmd_oracle_pa_collection(args, cfg):
    posets = [load_poset(x) for x in args.posets.split(",")]
    value, witness = pa_collection_witness(posets, args.n, _mode(args), cfg)
    return {"pa": str(value), "n": args.n, "mode": _mode(args), "witness": [f.to_json() for f in witness]}, EXIT_OK


def cmd_gst(args, cfg):
    return {"k": args.k, "n": args.n, "pa": str(gst_formula(args.k, args.n))}, EXIT_OK


def cmd_best_ratio(args, cfg):
    posets = [load_poset(x) for x in args.posets.split(",")]
    ratio, idx = best_ratio(posets, _mode(args), cfg)
    return {"ratio": ratio_json(ratio), "index": idx}, EXIT_OK


def build_report(cert, plan) -> dict:
    size = plan.embedding.poset.size
    copies, fam = count_copies(plan)
    limit = asymptotic_target(size, cert.m, plan.n)
    finite = partial_target(size, cert.m, cert.k, plan.n, plan.iterations)
    return {
        "m": cert.m,
        "mode": cert.mode,
        "k": cert.k,
        "witness": cert.witness.as_lists(),
        "n": plan.n,
        "iterations": plan.iterations,
        "layers": [dict(lay.to_json(), copies=str(copies_in_layer(plan, lay))) for lay in plan.layers],
        "copies": str(copies),
        "family_size": str(fam),
        "target": ratio_json(limit),
        "partial_target": ratio_json(finite),
        "ratio_to_target": ratio_json(Fraction(fam) / limit),
        "ratio_to_partial_target": ratio_json(Fraction(fam) / finite),
    }


def cmd_report(args, cfg):
    cert, plan = _plan(args, cfg)
    return build_report(cert, plan), EXIT_OK


def cmd_selftest(args, cfg):
    results = selftest.run_all(args.seed)
    ok = all(r.ok for r in results)
    doc = {
        "ok": ok,
        "seed": args.seed,
        "suites": [{"name": r.name, "ok": r.ok, "cases": r.cases, "detail": r.detail} for r in results],
    }
    return doc, EXIT_OK if ok else EXIT_VERIFY


def _flatten(doc, prefix=""):
    if isinstance(doc, dict):
        for key, val in doc.items():
            yield from _flatten(val, f"{prefix}{key}.")
    elif isinstance(doc, list) and doc and isinstance(doc[0], (dict, list)):
        for idx, val in enumerate(doc):
            yield from _flatten(val, f"{prefix}{idx}.")
    else:
        yield prefix.rstrip("."), json.dumps(doc) if isinstance(doc, list) else doc


def emit(doc, fmt: str, out=None):
    out = out or sys.stdout
    if fmt == "tsv":
        for key, val in _flatten(doc):
            print(f"{key}\t{val}", file=out)
    else:
        json.dump(doc, out, indent=None if isinstance(doc, list) else 2)
        print(file=out)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="output", action="store_const", const="json")
    fmt.add_argument("--tsv", dest="output", action="store_const", const="tsv")
    common.add_argument("--budget", type=int, help="override every work/output budget")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="posetpack", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=func)
        return sp

    def poset_args(sp, kmax=True):
        sp.add_argument("--poset", required=True, help="poset JSON file or a name like chain(2), V, J")
        sp.add_argument("--strong", action="store_true")
        if kmax:
            sp.add_argument("--kmax", type=int)

    sp = add("closure", cmd_closure, "convex closure of a family")
    sp.add_argument("family")
    sp = add("convex", cmd_convex, "is the family convex")
    sp.add_argument("family")
    sp = add("unrelated", cmd_unrelated, "are two families unrelated")
    sp.add_argument("first")
    sp.add_argument("second")
    sp = add("chains", cmd_chains, "count full chains meeting a family")
    sp.add_argument("family")
    sp.add_argument("--oracle", action="store_true", help="cross-check with the lattice DP")
    sp = add("abar", cmd_abar, "fewest full chains met by an m-set family")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp = add("cp", cmd_cp, "minimal closure size c(P) or c*(P)")
    poset_args(sp)
    for name, func, text in [("construct", cmd_construct, "build the layered packing"), ("report", cmd_report, "construction vs targets")]:
        sp = add(name, func, text)
        poset_args(sp)
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--iters", type=int, default=1)
        if name == "construct":
            sp.add_argument("--count-only", action="store_true")
            sp.add_argument("--out")
    sp = add("verify", cmd_verify, "check a copies file for pairwise unrelatedness")
    sp.add_argument("copies")
    sp = add("oracle-pa", cmd_oracle_pa, "exact pa(n,P) by clique search")
    poset_args(sp, kmax=False)
    sp.add_argument("--n", type=int, required=True)
    sp = add("oracle-pa-collection", cmd_oracle_pa_collection, "exact pa(n,{P_i})")
    sp.add_argument("--posets", required=True, help="comma-separated poset files or names")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--strong", action="store_true")
    sp = add("gst", cmd_gst, "closed-form packing number of a chain")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp = add("best-ratio", cmd_best_ratio, "max |P_i|/c(P_i) over a collection")
    sp.add_argument("--posets", required=True)
    sp.add_argument("--strong", action="store_true")
    add("selftest", cmd_selftest, "run the seeded property suites")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = args.output or "json"
    try:
        cfg = RunConfig.from_env(workers=args.workers, output=fmt, seed=args.seed)
        if args.budget is not None:
            cfg = cfg.with_budget(args.budget)
        doc, code = args.func(args, cfg)
    except PosetpackError as exc:
        emit({"error": type(exc).__name__, "message": str(exc)}, fmt, sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        emit({"error": "InputError", "message": str(exc)}, fmt, sys.stderr)
        return EXIT_INPUT
    emit(doc, fmt)
    return code


if __name__ == "__main__":
    sys.exit(main())
