"""Command-line entry point.

Exit codes: 0 success, 1 a "no" answer (uncolorable, unsatisfiable, failed
contract, monochromatic copy found), 2 usage or input errors, 3 budget
exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

from .detect import BudgetExceeded
from .digraph import Coloring, Digraph, DigraphError, EmbeddingError, to_dot
from .gadgets import CATALOG, GadgetContract, build_gadget, build_tower, check_contract, mutation_score, synthesize_gadget
from .patterns import PathPattern, PatternError, classify_problem, enumerate_orientations
from .reductions import (
    ReductionCertificate,
    ReductionError,
    Sat3Formula,
    compile_chain,
    planar3col_to_3col,
    random_formula,
    reduction_chain,
    reduction_report,
    sat3_to_2col,
)
from .solve import ENGINES, decide, encode_cnf, save_cnf_with_map, verify_coloring

OK, NO, USAGE, UNKNOWN = 0, 1, 2, 3


class UsageError(Exception):
    pass


# file helpers ------------------------------------------------------------------


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w") as fh:
        fh.write(text)


def _load_json(path: str) -> dict:
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from None


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def _pattern(text: str) -> PathPattern:
    try:
        return PathPattern.parse(text)
    except PatternError as exc:
        raise UsageError(f"bad pattern {text!r}: {exc}") from None


def load_instance(path: str, pattern: str | None, k: int | None) -> tuple[Digraph, PathPattern, int, ReductionCertificate | None]:
    """Reads a certificate or a bare digraph; flags override what the file says."""
    doc = _load_json(path)
    try:
        if "instance" in doc:
            cert = ReductionCertificate.from_json(doc)
            d, p, kk = cert.instance, cert.pattern, cert.k
        else:
            cert = None
            d = Digraph.from_json(doc.get("digraph", doc))
            p = PathPattern(doc["pattern"]) if "pattern" in doc else None
            kk = doc.get("k")
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: not an instance file ({exc})") from None
    if pattern is not None:
        p = _pattern(pattern)
    if k is not None:
        kk = k
    if p is None or kk is None:
        raise UsageError(f"{path}: pattern and k must be given in the file or by --pattern/--k")
    return d, p, kk, cert


def load_coloring(path: str) -> Coloring:
    doc = _load_json(path)
    try:
        return Coloring(doc["k"], tuple(doc["colors"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: not a coloring file ({exc})") from None


# subcommands ---------------------------------------------------------------------


def cmd_patterns(args) -> int:
    if args.n < 1:
        raise UsageError("n must be at least 1")
    for p in enumerate_orientations(args.n):
        print(p.word if p.word else "(single vertex)")
    return OK


def cmd_classify(args) -> int:
    print(classify_problem(_pattern(args.pattern), args.k).value)
    return OK


def _read_formula(args) -> Sat3Formula:
    if args.random:
        n, _, m = args.random.partition(",")
        return random_formula(random.Random(args.seed), int(n), int(m))
    if args.input is None:
        raise UsageError("give a DIMACS file or --random N,M")
    return Sat3Formula.from_dimacs(_read(args.input), source=args.input)


def _read_graph(path: str) -> Digraph:
    doc = _load_json(path)
    try:
        if "edges" in doc:
            return Digraph(doc["n"], tuple(tuple(e) for e in doc["edges"]))
        return Digraph.from_json(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: not a graph file ({exc})") from None


def cmd_reduce(args) -> int:
    if args.pattern:
        chain = reduction_chain(_pattern(args.pattern), args.k)
        source = _read_graph(args.input) if args.k == 3 else _read_formula(args)
        cert = compile_chain(chain, source)
    elif args.variant.upper() in ("P3", "V3", "L4") and not args.planar:
        cert = sat3_to_2col(_read_formula(args), args.variant)
    else:
        if args.input is None:
            raise UsageError("the planar 3-coloring reduction needs a graph file")
        cert = planar3col_to_3col(_read_graph(args.input), args.variant)
    _write(args.output, _dump(cert.to_json()))
    if args.dot:
        _write(args.dot, to_dot(cert.instance))
    if args.report or args.output in (None, "-"):
        print(json.dumps(reduction_report(cert), sort_keys=True), file=sys.stderr if args.output in (None, "-") else sys.stdout)
    return OK


def cmd_solve(args) -> int:
    d, p, k, cert = load_instance(args.instance, args.pattern, args.k)
    res = decide(d, p, k, engine=args.engine, budget=args.budget)
    if res.coloring is None:
        print("uncolorable")
        return NO
    doc = {"k": k, "colors": list(res.coloring.colors)}
    if cert is not None and cert.literal_vertices:
        doc["assignment"] = {str(i): b for i, b in cert.decode(res.coloring).items()}
    if args.output:
        _write(args.output, _dump(doc))
    print("colorable")
    if "assignment" in doc:
        print("assignment: " + " ".join(f"{i}={'T' if b else 'F'}" for i, b in sorted(cert.decode(res.coloring).items())))
    return OK


def cmd_verify(args) -> int:
    d, p, k, _ = load_instance(args.instance, args.pattern, args.k)
    c = load_coloring(args.coloring)
    if len(c) != d.n or c.k > k:
        raise UsageError(f"{args.coloring}: coloring does not fit the instance ({len(c)} vertices, {c.k} colors)")
    w = verify_coloring(d, c, p)
    if w is not None:
        print("monochromatic copy: " + " ".join(map(str, w)))
        return NO
    print("pattern-free")
    return OK


def _check_one(job: tuple[str, bool, int | None]) -> tuple[str, bool, list[str], str]:
    gid, mutate, budget = job
    g = build_gadget(gid)
    rep = check_contract(g, budget=budget)
    extra = ""
    if mutate:
        m = mutation_score(g, budget=budget)
        extra = f" mutants caught {m.caught}/{m.total} ({len(m.equivalent)} equivalent, rate {m.rate:.3f})"
    return gid, rep.passed, rep.failures(), extra


def cmd_gadget_check(args) -> int:
    ids = args.ids or list(CATALOG)
    for gid in ids:
        if gid not in CATALOG:
            raise UsageError(f"unknown gadget {gid!r}")
    jobs = [(gid, args.mutation, args.budget) for gid in ids]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            results = list(ex.map(_check_one, jobs))
    else:
        results = [_check_one(j) for j in jobs]
    ok = True
    for gid, passed, failures, extra in results:
        print(f"{gid}: {'pass' if passed else 'FAIL'}{extra}")
        for f in failures:
            print(f"  failed: {f}")
        ok &= passed
    return OK if ok else NO


def cmd_build_tower(args) -> int:
    p = _pattern(args.pattern)
    g = build_tower(p)
    doc = {"digraph": g.digraph.to_json(), "pattern": p.word, "k": args.k}
    _write(args.output, _dump(doc))
    if args.dot:
        _write(args.dot, to_dot(g.digraph, name="tower"))
    return OK


def cmd_synth(args) -> int:
    p = _pattern(args.pattern)
    pair = (("x", "y"),)
    kinds = {
        "extender": GadgetContract(args.k, p, forced_equalities=pair, boundary_extension=True),
        "negator": GadgetContract(args.k, p, forced_inequalities=pair, boundary_extension=True),
    }
    g = synthesize_gadget(kinds[args.kind], max_vertices=args.max_vertices, budget=args.budget or 2_000_000)
    if g is None:
        print("no gadget found")
        return NO
    _write(args.output, _dump(g.to_json(check_contract(g))))
    return OK


def cmd_export(args) -> int:
    if args.what == "catalog":
        os.makedirs(args.target, exist_ok=True)
        for gid in CATALOG:
            g = build_gadget(gid)
            _write(os.path.join(args.target, f"{gid}.json"), _dump(g.to_json(check_contract(g))))
            _write(os.path.join(args.target, f"{gid}.dot"), g.to_dot())
        print(f"wrote {len(CATALOG)} gadgets to {args.target}")
        return OK
    d, p, k, _ = load_instance(args.target, args.pattern, args.k)
    if args.what == "dot":
        c = load_coloring(args.coloring) if args.coloring else None
        _write(args.output, to_dot(d, coloring=c))
    else:
        f, vm = encode_cnf(d, p, k)
        if not args.output or args.output == "-":
            raise UsageError("cnf export needs -o FILE (the variable map goes next to it)")
        save_cnf_with_map(f, vm, args.output, args.output + ".map.json")
    return OK


# parser ------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pathfree", description="Path-free colorings of planar digraphs.")
    ap.add_argument("--budget", type=int, default=None, help="cap on solver nodes or search candidates")
    ap.add_argument("--seed", type=int, default=0, help="seed for random inputs")
    ap.add_argument("--jobs", type=int, default=1, help="worker processes for batch commands")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("patterns", help="list the orientations of the path on N vertices")
    s.add_argument("n", type=int)
    s.set_defaults(func=cmd_patterns)

    s = sub.add_parser("classify", help="complexity of pattern-free k-coloring")
    s.add_argument("pattern")
    s.add_argument("k", type=int)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("reduce", help="build a hard instance from a formula or a planar graph")
    s.add_argument("input", nargs="?")
    s.add_argument("--variant", default="p3", help="p3, v3 or l4 for formulas; v3 or p3 with --planar")
    s.add_argument("--planar", action="store_true", help="input is a planar graph for the 3-color reduction")
    s.add_argument("--pattern", help="build along the induction chain for this pattern")
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--random", metavar="N,M", help="use a random formula with N variables and M clauses")
    s.add_argument("-o", "--output")
    s.add_argument("--dot")
    s.add_argument("--report", action="store_true")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("solve", help="decide colorability of an instance")
    s.add_argument("instance")
    s.add_argument("--pattern")
    s.add_argument("--k", type=int)
    s.add_argument("--engine", choices=ENGINES, default="auto")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("verify", help="check a coloring for monochromatic copies")
    s.add_argument("instance")
    s.add_argument("coloring")
    s.add_argument("--pattern")
    s.add_argument("--k", type=int)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("gadget-check", help="check gadget contracts")
    s.add_argument("ids", nargs="*")
    s.add_argument("--mutation", action="store_true", help="also run single-arc-flip mutation testing")
    s.set_defaults(func=cmd_gadget_check)

    s = sub.add_parser("build-tower", help="write the tower of a pattern")
    s.add_argument("pattern")
    s.add_argument("--k", type=int, default=2)
    s.add_argument("-o", "--output")
    s.add_argument("--dot")
    s.set_defaults(func=cmd_build_tower)

    s = sub.add_parser("synth", help="search for a small wire gadget")
    s.add_argument("pattern")
    s.add_argument("--kind", choices=("extender", "negator"), default="extender")
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--max-vertices", type=int, default=6)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("export", help="write the gadget catalog, DOT drawings or CNF files")
    s.add_argument("what", choices=("catalog", "dot", "cnf"))
    s.add_argument("target", help="output directory for catalog, instance file otherwise")
    s.add_argument("--pattern")
    s.add_argument("--k", type=int)
    s.add_argument("--coloring")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_export)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    if args.budget is not None and args.budget <= 0:
        print("pathfree: --budget must be positive", file=sys.stderr)
        return USAGE
    if getattr(args, "k", None) is not None and args.k < 1:
        print("pathfree: k must be at least 1", file=sys.stderr)
        return USAGE
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"unknown: {exc}", file=sys.stderr)
        return UNKNOWN
    except (UsageError, ReductionError, PatternError, DigraphError, EmbeddingError, KeyError) as exc:
        print(f"pathfree: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
