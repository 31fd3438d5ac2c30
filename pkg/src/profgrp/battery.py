"""Verification battery: every desk-scale claim is a row of a JSON manifest.

A claim names an evaluator ``kind`` and its parameters; the evaluator returns
a dict of computed values and the row passes when every expected key matches
exactly.  Adding a claim is a manifest edit.
"""

from __future__ import annotations

import fnmatch
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib.resources import files
from pathlib import Path

from . import __version__
from .cache import ResultCache
from .catalog import (build, build_module, carmichael_presentation, central_quotient_satisfies,
                      check_doubled_relators, d_formula, pair_orbit_counts, section7_report)
from .coset_enum import CosetOverflow
from .field import GF
from .proficiency import ScaleBoundError, cohomology_cell, kunneth_certificate, proficiency, sweep

EXIT_OK = 0
EXIT_FAIL = 2
EXIT_SCALE = 3


def load_manifest(path: str | Path | None = None) -> list[dict]:
    if path is None:
        text = (files("profgrp") / "data" / "claims.json").read_text()
    else:
        text = Path(path).read_text()
    claims = json.loads(text)["claims"]
    ids = [c["id"] for c in claims]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate claim ids in manifest")
    return claims


# -- evaluators -------------------------------------------------------------------------------


def _group_properties(params, cache, seed, deep):
    cg = build(params["group"])
    G = cg.group
    out = {"order": G.order()}
    want = set(params.get("properties", []))
    if want & {"center_order", "quotient_order"}:
        out["center_order"] = len(G.center())
        out["quotient_order"] = out["order"] // out["center_order"]
    if "perfect" in want:
        out["perfect"] = G.is_perfect()
    if want & {"derived_order", "derived_perfect"}:
        D = G.derived_subgroup()
        out["derived_order"] = D.order()
        out["derived_perfect"] = D.is_perfect()
    if "quotient_relators" in want:
        n = int(params["group"].split(":")[1]) - 2
        out["quotient_relators"] = central_quotient_satisfies(G, carmichael_presentation(n))
    if "relators_verified" in want:
        out["relators_verified"] = bool(cg.provenance.get("relators_verified"))
    return out


def _cohomology(params, cache, seed, deep):
    cg = build(params["group"])
    F = GF(params["p"], params.get("k", 1))
    M = build_module(cg, F, params.get("module", "trivial"), seed, deep)
    c = cohomology_cell(cg, M, cache, seed)
    return {"dim": M.dim, **c, "nu2": -(-(c["h2"] - c["h1"] + c["h0"]) // M.dim)}


def _schur(params, cache, seed, deep):
    c = _cohomology({**params, "module": "trivial"}, cache, seed, deep)
    return {"rank": c["h2"] - c["h1"]}


def _relators_mod_center(params, cache, seed, deep):
    check = check_doubled_relators(params["p"])
    return {"ok": bool(check), "failing_index": check.failing_index}


def _pair_orbits(params, cache, seed, deep):
    ordered, unordered = pair_orbit_counts(build(params["group"]).group)
    return {"ordered": ordered, "unordered": unordered}


def _bounds(params, cache, seed, deep):
    """Upper bounds on ``h2`` over all irreducibles for the listed primes."""
    cg = build(params["group"])
    le_dim, equality, half, summed = True, [], True, True
    for p in params["primes"]:
        rows, _ = sweep(cg, p, seed, deep, cache)
        for r in rows:
            trivial = r.module == "irr:0"
            le_dim &= r.h2 <= r.dim
            if r.h2 == r.dim:
                equality.append([p, r.module])
            if not trivial:
                half &= 2 * r.h2 <= r.dim
                summed &= r.h1 + r.h2 <= r.dim
    return {"h2_le_dim": le_dim, "equality_at": equality, "nontrivial_h2_le_half_dim": half,
            "nontrivial_h1_plus_h2_le_dim": summed}


def _proficiency(params, cache, seed, deep):
    cert = proficiency(params["group"], seed, deep, cache)
    return {"verdict": cert.verdict, "max_nu2": cert.max_nu2, "rhat_minus_d": cert.rhat_minus_d,
            "schur_min_generators": cert.schur_min_generators, "complete": cert.complete}


def _kunneth(params, cache, seed, deep):
    a, b = params["groups"]
    cert = kunneth_certificate(a, b, seed, deep, cache)
    return {"max_nu2": cert.max_nu2, "trivial_nu2": cert.trivial_nu2,
            "proficient": any(m == ["irr:0", "irr:0"] for _, *m in cert.attained_at)}


def _section7(params, cache, seed, deep):
    rep = section7_report(params["H"], params["e"], params.get("engine_bound", 2000), seed)
    out = rep.to_json()
    out["engine_agrees"] = None if rep.engine is None else all(r["agree"] for r in rep.engine["rows"])
    out["nu2_max"] = max(rep.nu2)
    return out


def _d_formula(params, cache, seed, deep):
    return {"d": d_formula(params["d_H"], params["e"], params["s_prime"])}


EVALUATORS = {
    "group": _group_properties,
    "cohomology": _cohomology,
    "schur": _schur,
    "relators-mod-center": _relators_mod_center,
    "pair-orbits": _pair_orbits,
    "bounds": _bounds,
    "proficiency": _proficiency,
    "kunneth": _kunneth,
    "section7": _section7,
    "d-formula": _d_formula,
}


# -- running ----------------------------------------------------------------------------------


@dataclass
class BatteryReport:
    rows: list
    deep: bool
    seed: int
    audit: list | None = None
    toolkit_version: str = __version__
    counts: dict = field(default_factory=dict)

    def __post_init__(self):
        self.rows.sort(key=lambda r: r["id"])
        statuses = ("pass", "fail", "error", "skipped", "scale-bound")
        self.counts = {s: sum(r["status"] == s for r in self.rows) for s in statuses}

    @property
    def all_pass(self) -> bool:
        return self.counts["fail"] == 0 and self.counts["error"] == 0

    def exit_code(self, strict: bool = False) -> int:
        if strict and self.counts["scale-bound"]:
            return EXIT_SCALE
        return EXIT_OK if self.all_pass else EXIT_FAIL

    def to_json(self) -> dict:
        out = {"toolkit_version": self.toolkit_version, "seed": self.seed, "deep": self.deep,
               "counts": self.counts, "rows": self.rows}
        if self.audit is not None:
            out["audit"] = self.audit
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def run_claim(claim: dict, seed: int = 0, deep: bool = False, cache_dir: str | None = None,
              use_cache: bool = True, timings: bool = False, cache: ResultCache | None = None) -> dict:
    row = {"id": claim["id"], "description": claim.get("description", ""), "expected": claim["expected"]}
    if claim.get("deep") and not deep:
        row.update(computed=None, status="skipped")
        return row
    if cache is None:
        cache = ResultCache(cache_dir, enabled=use_cache)
    start = time.perf_counter()
    try:
        computed = EVALUATORS[claim["kind"]](claim["params"], cache, seed, deep)
        computed = {k: computed.get(k) for k in claim["expected"]}
        row["computed"] = computed
        row["status"] = "pass" if computed == claim["expected"] else "fail"
    except (ScaleBoundError, CosetOverflow, OverflowError) as exc:
        row.update(computed=None, status="scale-bound", message=str(exc))
    except Exception as exc:  # a crashing evaluator is a failed row, not a crashed battery
        row.update(computed=None, status="error", message=f"{type(exc).__name__}: {exc}")
    if timings:
        row["runtime_s"] = round(time.perf_counter() - start, 3)
    return row


def select(claims: list[dict], pattern: str | None) -> list[dict]:
    if not pattern:
        return list(claims)
    return [c for c in claims if fnmatch.fnmatchcase(c["id"], pattern)]


def battery(pattern: str | None = None, deep: bool = False, seed: int = 0, cache_dir: str | None = None,
            use_cache: bool = True, timings: bool = False, workers: int = 1, audit: bool = False,
            manifest: str | Path | None = None) -> BatteryReport:
    claims = select(load_manifest(manifest), pattern)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(run_claim, c, seed, deep, cache_dir, use_cache, timings) for c in claims]
            rows = [f.result() for f in futures]
        report = BatteryReport(rows, deep, seed)
        if audit:
            # replay sequentially so the cache learns the recipes; cells now come from disk
            cache = ResultCache(cache_dir, enabled=use_cache)
            for c in claims:
                run_claim(c, seed, deep, cache=cache)
            report.audit = cache.audit(10, seed)
        return report
    cache = ResultCache(cache_dir, enabled=use_cache)
    rows = [run_claim(c, seed, deep, timings=timings, cache=cache) for c in claims]
    report = BatteryReport(rows, deep, seed)
    if audit:
        report.audit = cache.audit(10, seed)
    return report
