"""``profgrp`` command-line front end."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .battery import EXIT_FAIL, EXIT_OK, EXIT_SCALE, battery
from .cache import ResultCache
from .catalog import SpecError, build, build_module, bundled_presentation, parse_char
from .cohomology import BAR_ORACLE_MAX_ORDER, bar_oracle, cohomology, nu2_value
from .coset_enum import CosetOverflow, enumerate_cosets
from .meataxe import endo_degree, irreducibles_report
from .presentations import parse_presentation
from .proficiency import ScaleBoundError, cohomology_cell, proficiency


def _one_based(perm) -> list[list[int]]:
    return [[x + 1 for x in c] for c in perm.cycles()]


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _cache(args) -> ResultCache:
    return ResultCache(enabled=not args.no_cache)


# -- commands ---------------------------------------------------------------------------------


def cmd_enumerate(args) -> int:
    if args.file:
        text = Path(args.file).read_text()
    elif args.bundled:
        text = str(bundled_presentation(args.bundled))
    else:
        text = args.text
    if text is None:
        raise SpecError("give --file, --bundled or --text")
    P = parse_presentation(text)
    sub = [P.word(w) for w in args.subgroup.split(";") if w.strip()] if args.subgroup else []
    table = enumerate_cosets(P, sub, args.max_cosets, args.strategy)
    index = table.index()
    payload = {
        "order": index,
        "strategy": table.strategy,
        "max_cosets_used": table.peak_cosets,
        "generators": [_one_based(g) for g in table.to_permutations()],
    }
    kind = "index" if sub else "order"
    _emit(args, payload, f"{kind} {index} ({table.strategy}, peak {table.peak_cosets} cosets)")
    return EXIT_OK


def cmd_group(args) -> int:
    cg = build(args.group, args.max_cosets)
    G = cg.group
    payload = {
        "spec": cg.name,
        "order": G.order(),
        "degree": G.degree,
        "generators": [_one_based(g) for g in G.generators],
        "tuple": [_one_based(g) for g in cg.tuple],
        "center_order": len(G.center()),
        "perfect": G.is_perfect(),
        "provenance": cg.provenance,
    }
    text = (f"{cg.name}: order {payload['order']} on {G.degree} points, "
            f"centre {payload['center_order']}, {'perfect' if payload['perfect'] else 'not perfect'}")
    _emit(args, payload, text)
    return EXIT_OK


def cmd_cohomology(args) -> int:
    cg = build(args.group, args.max_cosets)
    F = parse_char(args.char)
    M = build_module(cg, F, args.module, args.seed, args.deep)
    if args.method == "bar":
        if cg.order() > BAR_ORACLE_MAX_ORDER:
            raise ScaleBoundError(f"bar oracle is limited to order {BAR_ORACLE_MAX_ORDER}")
        h0, h1, h2 = bar_oracle(cg.group, M)
        method = "bar"
    elif args.no_cache:
        rep = cohomology(cg.group, M, cg.tuple)
        h0, h1, h2, method = rep.h0, rep.h1, rep.h2, rep.method
    else:
        c = cohomology_cell(cg, M, _cache(args), args.seed)
        h0, h1, h2, method = c["h0"], c["h1"], c["h2"], "relation-module"
    payload = {"h0": h0, "h1": h1, "h2": h2, "nu2": nu2_value(h0, h1, h2, M.dim), "method": method,
               "seed": args.seed}
    text = (f"{cg.name}, {F}, {args.module} (dim {M.dim}): h0={h0} h1={h1} h2={h2} "
            f"nu2={payload['nu2']} [{method}]")
    _emit(args, payload, text)
    return EXIT_OK


def cmd_irreducibles(args) -> int:
    cg = build(args.group, args.max_cosets)
    F = parse_char(args.char)
    report = irreducibles_report(cg.group, F, args.seed, deep=args.deep)
    mods = [{"name": M.name, "dim": M.dim, "endo_degree": endo_degree(M), "source": src}
            for M, src in zip(report.modules, report.sources)]
    payload = {"group": cg.name, "field": str(F), "expected_count": report.expected_count,
               "complete": report.complete, "modules": mods, "seed": args.seed}
    lines = [f"{cg.name} over {F}: {len(mods)} irreducibles (expected {report.expected_count})"]
    lines += [f"  {m['name']}: dim {m['dim']}, endo degree {m['endo_degree']}, from {m['source']}" for m in mods]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_proficiency(args) -> int:
    cert = proficiency(args.group, args.seed, args.deep, _cache(args), strict=args.strict)
    if args.csv:
        Path(args.csv).write_text(cert.to_csv())
    if args.json:
        print(cert.dumps())
    elif not cert.certifying:
        print(f"{cert.group}: no certificate ({cert.message})")
    else:
        print(f"{cert.group} (order {cert.order}): {cert.verdict}; max nu2 = {cert.max_nu2} at "
              + ", ".join(f"p={p} {m}" for p, m in cert.attained_at)
              + f"; r_hat - d = {cert.rhat_minus_d}")
        for p in cert.primes:
            for r in cert.table[str(p)]:
                print(f"  p={p} {r['module']:>7} dim {r['dim']:>3} endo {r['endo_degree']} "
                      f"h0={r['h0']} h1={r['h1']} h2={r['h2']} nu2={r['nu2']}")
    return EXIT_OK


def cmd_battery(args) -> int:
    report = battery(args.filter, args.deep, args.seed, None, not args.no_cache, args.timings,
                     args.workers, args.audit, args.manifest)
    if args.json:
        print(report.dumps())
    else:
        for row in report.rows:
            extra = f"  [{row['runtime_s']:.2f}s]" if "runtime_s" in row else ""
            print(f"{row['status'].upper():>11}  {row['id']}{extra}")
            if row["status"] not in ("pass", "skipped"):
                print(f"             expected {row['expected']}, computed {row['computed']}")
        c = report.counts
        print(f"{c['pass']} passed, {c['fail']} failed, {c['error']} errors, {c['skipped']} skipped, "
              f"{c['scale-bound']} at scale bound")
        if report.audit is not None:
            bad = [a["key"] for a in report.audit if not a["match"]]
            print(f"cache audit: {len(report.audit) - len(bad)}/{len(report.audit)} cells reproduced")
    code = report.exit_code(args.strict)
    if report.audit and not all(a["match"] for a in report.audit):
        code = max(code, EXIT_FAIL)
    return code


# -- parser -----------------------------------------------------------------------------------


def _add_global(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--json", action="store_true", default=d(False), help="emit JSON")
    p.add_argument("--seed", type=int, default=d(0), help="random seed (default 0)")
    env_cosets = os.environ.get("PROFGRP_MAX_COSETS")
    p.add_argument("--max-cosets", type=int, default=d(int(env_cosets) if env_cosets else None),
                   help="coset table limit (env PROFGRP_MAX_COSETS)")
    p.add_argument("--deep", action="store_true", default=d(False), help="allow groups of order up to 2520")
    p.add_argument("--strict", action="store_true", default=d(False), help="exit 3 when a scale bound is hit")
    p.add_argument("--no-cache", action="store_true", default=d(False), help="bypass the result cache")
    p.add_argument("--timings", action="store_true", default=d(False), help="report wall-clock times")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="profgrp", description=__doc__)
    parser.add_argument("--version", action="version", version=f"profgrp {__version__}")
    _add_global(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_global(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="Todd-Coxeter coset enumeration")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--file", help="presentation file (.pres)")
    src.add_argument("--text", help="presentation text, e.g. '< x, y | x^2, y^3, (x*y)^5 >'")
    src.add_argument("--bundled", help="name of a shipped presentation, e.g. rel43")
    p.add_argument("--subgroup", help="subgroup generators separated by ';'")
    p.add_argument("--strategy", choices=["hlt", "felsch"], default="hlt")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("group", parents=[common], help="build a catalog group")
    p.add_argument("--group", required=True, help="group spec, e.g. alt:5 or sdp:(frob:21,natural,2)")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("cohomology", parents=[common], help="h0, h1, h2 and nu2 of one module")
    p.add_argument("--group", required=True)
    p.add_argument("--char", required=True, help="p or p,k for the field of order p^k")
    p.add_argument("--module", default="trivial", help="module spec, e.g. heart or tensor:irr:1,irr:2")
    p.add_argument("--method", choices=["relation-module", "bar"], default="relation-module")
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("irreducibles", parents=[common], help="all irreducible modules over a field")
    p.add_argument("--group", required=True)
    p.add_argument("--char", required=True)
    p.set_defaults(func=cmd_irreducibles)

    p = sub.add_parser("proficiency", parents=[common], help="proficiency certificate")
    p.add_argument("--group", required=True)
    p.add_argument("--csv", help="also write the per-prime table as CSV")
    p.set_defaults(func=cmd_proficiency)

    p = sub.add_parser("battery", parents=[common], help="run the verification battery")
    p.add_argument("--filter", help="claim id glob, e.g. 'heart-h2.*'")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--audit", action="store_true", help="recompute 10 random cached cells and compare")
    p.add_argument("--manifest", help="alternative claims manifest (JSON)")
    p.set_defaults(func=cmd_battery)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OverflowError, CosetOverflow) as exc:
        print(f"profgrp: scale bound: {exc}", file=sys.stderr)
        return EXIT_SCALE if args.strict else EXIT_FAIL
    except (SpecError, ValueError) as exc:
        print(f"profgrp: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
