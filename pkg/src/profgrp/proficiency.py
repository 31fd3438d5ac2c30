"""Proficiency certificates.

A finite group is proficient exactly when the largest ``nu2`` over all
primes ``p`` and irreducible ``F_p G``-modules is reached at a trivial
module; then ``r_hat - d = max nu2 - 1``.  Primes not dividing ``|G|``
contribute ``nu2 = 1`` at the trivial module and at most ``0`` elsewhere,
so only prime divisors of the order are swept.
"""

from __future__ import annotations

import csv
import io
import json
from math import lcm
from dataclasses import asdict, dataclass, field

from . import __version__
from .cache import ResultCache, content_key
from .catalog import CatalogGroup, build
from .cohomology import cohomology, kunneth_h, nu2_value
from .field import GF, prime_factors
from .meataxe import endo_degree, irreducibles_report
from .modules import GModule

SCHEMA_VERSION = 1


class ScaleBoundError(OverflowError):
    pass


@dataclass
class ModuleRow:
    module: str
    dim: int
    endo_degree: int
    h0: int
    h1: int
    h2: int
    nu2: int
    source: str = ""


@dataclass
class ProficiencyCertificate:
    group: str
    order: int
    primes: list
    table: dict  # str(p) -> list of ModuleRow dicts
    schur_ranks: dict  # str(p) -> h2 - h1 on the trivial module
    schur_min_generators: int
    max_nu2: int
    attained_at: list  # [p, module] pairs
    verdict: str
    rhat_minus_d: int
    irreducible_counts: dict
    complete: bool
    seed: int
    certifying: bool = True
    message: str = ""
    schema_version: int = SCHEMA_VERSION
    toolkit_version: str = __version__

    def to_json(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "toolkit_version": self.toolkit_version,
            "group": self.group,
            "order": self.order,
            "primes": self.primes,
            "seed": self.seed,
            "verdict": self.verdict,
            "max_nu2": self.max_nu2,
            "attained_at": self.attained_at,
            "rhat_minus_d": self.rhat_minus_d,
            "schur_ranks": self.schur_ranks,
            "schur_min_generators": self.schur_min_generators,
            "complete": self.complete,
            "certifying": self.certifying,
            "message": self.message,
            "irreducible_counts": self.irreducible_counts,
            "table": self.table,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "module", "dim", "endo_degree", "h0", "h1", "h2", "nu2"])
        for p in self.primes:
            for row in self.table[str(p)]:
                w.writerow([p, row["module"], row["dim"], row["endo_degree"], row["h0"], row["h1"],
                            row["h2"], row["nu2"]])
        return buf.getvalue()


def _group_key(cg: CatalogGroup) -> dict:
    return {"group": cg.group.to_json(), "tuple": [g.cycles() for g in cg.tuple]}


def cohomology_cell(cg: CatalogGroup, M: GModule, cache: ResultCache | None = None, seed: int = 0) -> dict:
    """``{h0, h1, h2}`` of one module, cached by content."""

    def compute():
        rep = cohomology(cg.group, M, cg.tuple)
        return {"h0": rep.h0, "h1": rep.h1, "h2": rep.h2}

    if cache is None:
        return compute()
    key = content_key("cohomology", _group_key(cg), M.content_key(), "relation-module", seed)
    return cache.cell(key, compute)


def _irreducibles(cg: CatalogGroup, F, seed: int, deep: bool, bound: int | None):
    try:
        return irreducibles_report(cg.group, F, seed, bound=bound, deep=deep)
    except OverflowError as exc:
        raise ScaleBoundError(str(exc)) from None


def sweep(cg: CatalogGroup, p: int, seed: int = 0, deep: bool = False, cache: ResultCache | None = None,
          bound: int | None = None, field_degree: int = 1):
    """Rows for every irreducible module over ``F_{p^k}``."""
    F = GF(p, field_degree)
    report = _irreducibles(cg, F, seed, deep, bound)
    rows = []
    for M, src in zip(report.modules, report.sources):
        c = cohomology_cell(cg, M, cache, seed)
        rows.append(ModuleRow(M.name, M.dim, endo_degree(M), c["h0"], c["h1"], c["h2"],
                              nu2_value(c["h0"], c["h1"], c["h2"], M.dim), src))
    return rows, report


def proficiency(spec, seed: int = 0, deep: bool = False, cache: ResultCache | None = None,
                bound: int | None = None, strict: bool = True) -> ProficiencyCertificate:
    """Sweep every prime dividing ``|G|``.  Past the irreducibles bound this
    raises :class:`ScaleBoundError`, or with ``strict=False`` returns an empty
    certificate flagged as non-certifying."""
    cg = spec if isinstance(spec, CatalogGroup) else build(spec)
    order = cg.order()
    primes = prime_factors(order)
    try:
        return _certify(cg, order, primes, seed, deep, cache, bound)
    except ScaleBoundError as exc:
        if strict:
            raise
        return ProficiencyCertificate(cg.name, order, primes, {}, {}, 0, 0, [], "undecided", -1, {},
                                      False, seed, certifying=False, message=str(exc))


def _certify(cg, order, primes, seed, deep, cache, bound) -> ProficiencyCertificate:
    table, schur, counts = {}, {}, {}
    complete = True
    best, where = 1, []
    for p in primes:
        rows, report = sweep(cg, p, seed, deep, cache, bound)
        table[str(p)] = [asdict(r) for r in rows]
        counts[str(p)] = {"found": len(report.modules), "expected": report.expected_count}
        complete &= report.complete
        triv = rows[0]
        if triv.module != "irr:0" or triv.dim != 1 or triv.source != "trivial":
            raise RuntimeError("the trivial module should be listed first")
        schur[str(p)] = triv.h2 - triv.h1
        for r in rows:
            if r.nu2 > best:
                best, where = r.nu2, []
            if r.nu2 == best:
                where.append([p, r.module])
    verdict = "proficient" if any(m == "irr:0" for _, m in where) else "not-proficient"
    return ProficiencyCertificate(
        group=cg.name,
        order=order,
        primes=primes,
        table=table,
        schur_ranks=schur,
        schur_min_generators=max(schur.values(), default=0),
        max_nu2=best,
        attained_at=where,
        verdict=verdict,
        rhat_minus_d=best - 1,
        irreducible_counts=counts,
        complete=complete,
        seed=seed,
    )


# -- direct products through the Kunneth formula ---------------------------------------------


def splitting_degree(cg: CatalogGroup, p: int, seed: int = 0, deep: bool = False) -> int:
    """Least ``k`` such that ``F_{p^k}`` splits every irreducible ``F_p G``-module."""
    report = _irreducibles(cg, GF(p), seed, deep, None)
    return lcm(*(endo_degree(M) for M in report.modules))


@dataclass
class KunnethCertificate:
    factors: list
    primes: list
    fields: dict
    table: dict = field(default_factory=dict)
    max_nu2: int = 1
    attained_at: list = field(default_factory=list)
    trivial_nu2: int = 1

    def to_json(self) -> dict:
        return asdict(self)


def kunneth_certificate(spec1, spec2, seed: int = 0, deep: bool = False,
                        cache: ResultCache | None = None) -> KunnethCertificate:
    """``nu2`` over every irreducible module of ``G1 x G2`` from per-factor
    sweeps.  Over a splitting field the irreducibles of the product are the
    outer tensor products, and extending scalars splits an ``F_p``-module with
    endomorphism field of degree ``f`` into ``f`` conjugates with the same
    ``nu2``, so the maximum is unchanged."""
    A = spec1 if isinstance(spec1, CatalogGroup) else build(spec1)
    B = spec2 if isinstance(spec2, CatalogGroup) else build(spec2)
    primes = sorted(set(prime_factors(A.order())) | set(prime_factors(B.order())))
    cert = KunnethCertificate([A.name, B.name], primes, {})
    best, where = 1, []
    for p in primes:
        k = lcm(splitting_degree(A, p, seed, deep), splitting_degree(B, p, seed, deep))
        cert.fields[str(p)] = f"GF({p}^{k})" if k > 1 else f"GF({p})"
        rows_a, _ = sweep(A, p, seed, deep, cache, field_degree=k)
        rows_b, _ = sweep(B, p, seed, deep, cache, field_degree=k)
        cells = []
        for ra in rows_a:
            for rb in rows_b:
                h = kunneth_h((ra.h0, ra.h1, ra.h2), (rb.h0, rb.h1, rb.h2))
                nu = nu2_value(*h, ra.dim * rb.dim)
                cells.append({"modules": [ra.module, rb.module], "dim": ra.dim * rb.dim,
                              "h0": h[0], "h1": h[1], "h2": h[2], "nu2": nu})
                if nu > best:
                    best, where = nu, []
                if nu == best:
                    where.append([p, ra.module, rb.module])
                if ra.module == "irr:0" and rb.module == "irr:0":
                    cert.trivial_nu2 = max(cert.trivial_nu2, nu)
        cert.table[str(p)] = cells
    cert.max_nu2 = best
    cert.attained_at = where
    return cert
