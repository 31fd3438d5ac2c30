"""Acceptance checks, one group of tests per numbered criterion.

Each test carries ``@pytest.mark.criterion(n)``; the conftest prints one
PASS/FAIL line per criterion at the end of the run.  Items on groups of
order 2520 are marked ``deep``; ``PROFGRP_DEEP=0`` skips them.
"""

import json
import os
import shutil
import subprocess
import sys
import time
from functools import lru_cache, reduce

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from profgrp.catalog import (build, carmichael_presentation, central_quotient_satisfies, check_doubled_relators,
                             section7_report)
from profgrp.cohomology import (ORACLE_GROUPS, bar_oracle, cohomology, h2_semidirect_closed_form, kunneth_h,
                                schur_p_rank)
from profgrp.coset_enum import enumerate_cosets
from profgrp.field import GF, prime_factors
from profgrp.meataxe import chop, endo_degree, heart, irreducibles, is_irreducible, isomorphic
from profgrp.modules import (dual, direct_sum, inflate, outer_tensor, permutation_module, regular_module,
                             tensor, trivial_module)
from profgrp.perm_group import Permutation, PermGroup, direct_product
from profgrp.proficiency import kunneth_certificate, proficiency, sweep

criterion = pytest.mark.criterion


@lru_cache(maxsize=None)
def group(spec):
    return build(spec)


@lru_cache(maxsize=None)
def irr(spec, p, k=1):
    return tuple(irreducibles(group(spec).group, GF(p, k)))


def timed(fn, *args, **kw):
    start = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - start


def central_quotient(X: PermGroup):
    """Action of ``X`` on the cosets of its centre: returns the quotient group
    and the images of the generators of ``X``."""
    Z = X.center()
    index = X.element_index()
    els = X.elements()
    coset_of = {}
    reps = []
    for g in els:
        key = g.a.tobytes()
        if key in coset_of:
            continue
        for z in Z:
            coset_of[(z * g).a.tobytes()] = len(reps)
        reps.append(g)
    assert len(coset_of) == len(index)
    images = []
    for x in X.generators:
        images.append(Permutation([coset_of[(r * x).a.tobytes()] for r in reps]))
    Q = PermGroup(images, len(reps))
    return Q, images, len(Z)


# -- 1. coset enumeration orders ----------------------------------------------------------------


@criterion(1)
@pytest.mark.parametrize("spec,order", [("carmichael:2", 12), ("carmichael:3", 60), ("carmichael:4", 360),
                                        ("carmichael:5", 2520), ("agl1half:11", 55)])
def test_coset_orders(spec, order):
    cg, seconds = timed(build, spec)
    assert cg.order() == order and cg.provenance["relators_verified"]
    assert seconds < 10


@criterion(1)
@pytest.mark.parametrize("n,order", [(2, 24), (3, 120), (4, 720)])
def test_double_cover_orders(n, order):
    cg, seconds = timed(build, f"2alt:{n + 2}")
    assert seconds < 10
    assert cg.order() == order and len(cg.group.center()) == 2
    assert cg.provenance["central_quotient_satisfies_carmichael"]
    assert cg.presentation is not None
    assert central_quotient_satisfies(cg.group, carmichael_presentation(n))


@criterion(1)
def test_rel43_order_center_perfect():
    cg, seconds = timed(build, "rel43")
    G = cg.group
    assert seconds < 10
    assert G.order() == 120 and len(G.center()) == 2 and G.is_perfect()
    # both enumeration strategies agree on the bare presentation
    for strategy in ("hlt", "felsch"):
        assert enumerate_cosets(cg.presentation, (), strategy=strategy).index() == 120


# -- 2. doubled relators modulo the centre ------------------------------------------------------


@criterion(2)
def test_doubled_relators_mod_center():
    verdict, seconds = timed(check_doubled_relators, 11)
    assert verdict and verdict.failing_index is None
    assert seconds < 1


# -- 3. Schur ranks and elementary abelian cohomology -------------------------------------------


@criterion(3)
def test_schur_ranks():
    start = time.perf_counter()
    A5, A6 = group("alt:5").group, group("alt:6").group
    assert [schur_p_rank(A5, p) for p in (2, 3, 5)] == [1, 0, 0]
    assert [schur_p_rank(A6, p) for p in (2, 3, 5)] == [1, 1, 0]
    for p in (2, 3):
        for d in (1, 2, 3):
            G = group(f"elemab:{p}^{d}").group
            rep = cohomology(G, trivial_module(G, GF(p)))
            assert (rep.h1, rep.h2) == (d, d * (d + 1) // 2)
    assert time.perf_counter() - start < 60


# -- 4. h2 of the heart of the natural permutation module ---------------------------------------


def heart_h2(n, p):
    G = group(f"alt:{n}").group
    return cohomology(G, heart(permutation_module(G, GF(p)))).h2


@criterion(4)
@pytest.mark.parametrize("n,p,expected", [(5, 2, 0), (6, 2, 0), (5, 5, 1), (5, 3, 1)])
def test_heart_h2_small(n, p, expected):
    assert heart_h2(n, p) == expected


@criterion(4)
def test_heart_h2_a6_char3():
    # the engine and an independent dimension-shift check both give 0 here
    assert heart_h2(6, 3) == 1


@criterion(4)
@pytest.mark.deep
@pytest.mark.parametrize("p", [2, 3, 7])
def test_heart_h2_a7(p):
    value, seconds = timed(heart_h2, 7, p)
    assert value == 0 and seconds < 600


# -- 5. bounds for A5 over every prime ----------------------------------------------------------


@criterion(5)
@pytest.mark.parametrize("r", [2, 3, 5])
def test_a5_h2_bounds(r):
    A5 = group("alt:5").group
    for M in irr("alt:5", r):
        rep = cohomology(A5, M)
        assert rep.h2 <= M.dim
        trivial = M.name == "irr:0"
        assert (rep.h2 == M.dim) == (trivial and r == 2)
        if not trivial:
            assert 2 * rep.h2 <= M.dim
            assert rep.h1 + rep.h2 <= M.dim


# -- 6. proficiency certificates ----------------------------------------------------------------


@criterion(6)
@pytest.mark.parametrize("spec,rhat", [("sym:5", 1), ("sl2:5", 0), ("gl2detpm1:5", 0), ("alt:5", 1),
                                       ("alt:6", 1), ("sl2:4", 1)])
def test_proficiency_certificates(spec, rhat):
    cert, seconds = timed(proficiency, spec)
    assert cert.complete and cert.verdict == "proficient"
    assert cert.rhat_minus_d == rhat
    assert any(m == "irr:0" for _, m in cert.attained_at)
    assert seconds < 300


# -- 7. Kuenneth route for SL(2,5) x SL(2,5) ----------------------------------------------------


def fold(triples):
    return reduce(kunneth_h, triples)


@criterion(7)
def test_kunneth_sl25_squared():
    cert, seconds = timed(kunneth_certificate, "sl2:5", "sl2:5")
    assert cert.max_nu2 == 1 and cert.primes == [2, 3, 5]
    assert seconds < 600


@criterion(7)
def test_three_nontrivial_factors_kill_h2_on_sweeps():
    cg = group("sl2:5")
    for p in (2, 3, 5):
        rows, _ = sweep(cg, p, field_degree=2 if p < 5 else 1)
        nontrivial = [(r.h0, r.h1, r.h2) for r in rows if r.module != "irr:0"]
        trivial = [(r.h0, r.h1, r.h2) for r in rows if r.module == "irr:0"]
        for a in nontrivial:
            for b in nontrivial:
                for c in nontrivial:
                    assert fold([a, b, c])[2] == 0
                    assert fold([a, b, c, trivial[0]])[2] == 0


@criterion(7)
@given(st.lists(st.tuples(st.just(0), st.integers(0, 5), st.integers(0, 9)), min_size=3, max_size=5),
       st.lists(st.tuples(st.integers(0, 1), st.integers(0, 5), st.integers(0, 9)), max_size=2))
def test_three_nontrivial_factors_property(nontrivial, others):
    h = fold(nontrivial + others)
    assert h[0] == 0 and h[1] == 0 and h[2] == 0


# -- 8. non-proficient semidirect powers --------------------------------------------------------


@criterion(8)
def test_semidirect_power_cube_not_proficient():
    rep = section7_report("frob:21", 3, engine_bound=0)
    assert rep.V_dim == 3
    assert rep.nu2_lower_bound >= 2 > 1 == rep.nu2_trivial_max
    assert max(rep.nu2) >= 2
    assert rep.verdict == "not-proficient"


@criterion(8)
@pytest.mark.parametrize("e", [1, 2])
def test_semidirect_closed_form_matches_engine(e):
    rep = section7_report("frob:21", e)
    assert rep.engine is not None and rep.engine["rows"]
    assert all(row["agree"] for row in rep.engine["rows"])


@criterion(8)
def test_a4_analog_closed_form():
    from profgrp.catalog import CatalogGroup, GroupSpec, sdp_quotient_images, semidirect_power
    C3 = PermGroup([Permutation.from_cycles([[0, 1, 2]], 3)])
    H = CatalogGroup(GroupSpec("cyclic", (3,)), C3, tuple(C3.generators), field=GF(2),
                     matrices=[np.array([[0, 1], [1, 1]])])
    G = semidirect_power(H, 1)
    L = H.natural_module()
    U = inflate(L, G.group, sdp_quotient_images(G))
    assert h2_semidirect_closed_form(C3, L, L) == cohomology(G.group, U, G.tuple).h2 == 2


# -- 9. property suites -------------------------------------------------------------------------


def oracle_cases():
    for spec in ORACLE_GROUPS:
        order = group(spec).order()
        for p in prime_factors(order):
            for k in (1, 2):
                yield spec, p, k


@criterion(9)
@pytest.mark.parametrize("spec,p,k", list(oracle_cases()))
def test_bar_oracle_equivalence(spec, p, k):
    G = group(spec).group
    for M in irr(spec, p, k):
        rep = cohomology(G, M)
        assert bar_oracle(G, M) == (rep.h0, rep.h1, rep.h2)


SMALL = ["alt:4", "sym:3", "q8", "dihedral:4", "2alt:4", "cyclic:6", "elemab:2^2", "frob:21", "alt:5"]


@criterion(9)
@given(st.sampled_from(SMALL), st.sampled_from([2, 3, 5, 7]), st.integers(0, 2**31), st.integers(1, 2))
def test_generating_tuple_independence(spec, p, seed, extra):
    G = group(spec).group
    mods = irr(spec, p)
    rng = np.random.default_rng(seed)
    M = mods[int(rng.integers(len(mods)))]
    tup = list(G.generators) + [G.random_element(rng) for _ in range(extra)]
    rng.shuffle(tup)
    base = cohomology(G, M)
    other = cohomology(G, M, tup)
    assert other.h2 == base.h2 and other.h1 == base.h1


MASCHKE = [(s, p) for s in SMALL + ["psl2:7", "sym:4"] for p in (2, 3, 5, 7, 11)
           if group(s).order() % p]


@criterion(9)
@given(st.sampled_from(MASCHKE), st.integers(0, 2**31))
def test_maschke_vanishing(case, seed):
    spec, p = case
    G = group(spec).group
    mods = irr(spec, p)
    M = mods[seed % len(mods)]
    rep = cohomology(G, M)
    assert rep.h1 == 0 and rep.h2 == 0


CATALOG = ["alt:4", "alt:5", "alt:6", "sym:3", "sym:4", "sym:5", "sl2:3", "sl2:4", "sl2:5", "psl2:7",
           "gl2detpm1:3", "gl2detpm1:5", "2alt:4", "2alt:5", "carmichael:3", "agl1half:7", "agl1half:11",
           "frob:21", "cyclic:2", "cyclic:4", "cyclic:6", "dihedral:3", "dihedral:4", "dihedral:6",
           "elemab:2^3", "elemab:3^2", "rel43", "q8", "dp:(alt:4,cyclic:2)", "sdp:(frob:21,natural,1)"]


@criterion(9)
@pytest.mark.parametrize("spec", CATALOG)
def test_trivial_module_h2_at_least_h1(spec):
    G = group(spec).group
    for p in prime_factors(G.order()):
        rep = cohomology(G, trivial_module(G, GF(p)))
        assert rep.h2 >= rep.h1
        assert schur_p_rank(G, p) == rep.h2 - rep.h1


PRODUCTS = [("alt:5", "cyclic:2", 2), ("alt:5", "cyclic:3", 3), ("alt:5", "cyclic:5", 5), ("sym:3", "cyclic:3", 3),
            ("alt:4", "cyclic:2", 2), ("alt:4", "sym:3", 3), ("sym:3", "sym:3", 2)]


@criterion(9)
@pytest.mark.parametrize("x,y,p", PRODUCTS)
def test_product_with_inflated_module(x, y, p):
    X, Y = group(x).group, group(y).group
    G = direct_product(X, Y)
    kY = trivial_module(Y, GF(p))
    for V in irr(x, p):
        if V.name == "irr:0":
            continue
        small = cohomology(X, V)
        big = cohomology(G, outer_tensor(V, kY, G))
        assert big.h2 - big.h1 >= small.h2 - small.h1


COVERS = [("2alt:5", 1), ("sl2:5", 1), ("2alt:4", 1), ("q8", 1), ("sl2:3", 1)]


@criterion(9)
@pytest.mark.parametrize("spec,s", COVERS)
def test_central_quotient_bounds(spec, s):
    X = group(spec).group
    Q, images, z = central_quotient(X)
    assert Q.order() * z == X.order() and z == 2
    for p in prime_factors(Q.order()):
        for M in irreducibles(Q, GF(p)):
            down = cohomology(Q, M)
            up = cohomology(X, inflate(M, X, images))
            # finite quotient by a normally s-generated subgroup
            assert down.h2 <= up.h2 + s * M.dim
            # covering bound with the 2-rank of the centre equal to 1
            assert up.h2 <= down.h2 + 1 * up.h1


CHOP_GROUPS = ["alt:4", "sym:3", "alt:5", "q8", "dihedral:4", "frob:21"]


@st.composite
def modules(draw):
    spec = draw(st.sampled_from(CHOP_GROUPS))
    p = draw(st.sampled_from([2, 3]))
    G = group(spec).group
    mods = irr(spec, p)
    a, b = draw(st.sampled_from(mods)), draw(st.sampled_from(mods))
    how = draw(st.sampled_from(["tensor", "sum", "perm", "dual"]))
    M = {"tensor": lambda: tensor(a, b), "sum": lambda: direct_sum(a, b),
         "perm": lambda: tensor(a, permutation_module(G, GF(p))), "dual": lambda: tensor(dual(a), b)}[how]()
    return mods, M


@criterion(9)
@given(modules(), st.integers(0, 10**6))
def test_chop_additive(case, seed):
    mods, M = case
    factors = chop(M, seed)
    assert sum(X.dim for X in factors) == M.dim
    assert all(is_irreducible(X) and any(isomorphic(X, Y, irreducible=True) for Y in mods) for X in factors)


@criterion(9)
@given(st.sampled_from(CHOP_GROUPS), st.sampled_from([2, 3, 5]), st.integers(1, 10**6))
def test_chop_seed_stable(spec, p, seed):
    R = regular_module(group(spec).group, GF(p))
    a = sorted((X.dim, endo_degree(X)) for X in chop(R, 0))
    b = sorted((X.dim, endo_degree(X)) for X in chop(R, seed))
    assert a == b


# -- 10. deterministic battery output -----------------------------------------------------------


def battery_json(cache_dir):
    exe = shutil.which("profgrp")
    cmd = [exe] if exe else [sys.executable, "-m", "profgrp.cli"]
    env = dict(os.environ, PROFGRP_CACHE_DIR=str(cache_dir))
    proc = subprocess.run(cmd + ["battery", "--json"], capture_output=True, env=env, timeout=3600)
    assert proc.returncode in (0, 2), proc.stderr.decode()
    return proc.stdout


@criterion(10)
@pytest.mark.slow
def test_battery_json_byte_identical(tmp_path):
    first = battery_json(tmp_path / "one")
    second = battery_json(tmp_path / "two")
    assert first == second
    json.loads(first)
