import pytest

from profgrp.catalog import (BUNDLED, SpecError, build, build_module, bundled_presentation,
                             central_quotient_satisfies, carmichael_presentation, check_doubled_relators,
                             d_formula, pair_orbit_counts, parse_char, parse_group_spec, section7_report)
from profgrp.field import GF
from profgrp.meataxe import endo_degree, is_irreducible
from profgrp.perm_group import PermGroup

ORDERS = {
    "alt:5": 60, "sym:4": 24, "sl2:5": 120, "psl2:7": 168, "gl2detpm1:5": 240, "2alt:5": 120,
    "carmichael:4": 360, "agl1half:11": 55, "frob:21": 21, "cyclic:6": 6, "dihedral:4": 8,
    "elemab:2^3": 8, "rel43": 120, "q8": 8, "dp:(alt:5,cyclic:2)": 120, "sdp:(frob:21,natural,2)": 1344,
}


@pytest.mark.parametrize("spec", sorted(ORDERS))
def test_orders_and_tuples(spec):
    cg = build(spec)
    assert cg.order() == ORDERS[spec]
    assert str(cg.spec) == spec
    assert cg.provenance["order"] == ORDERS[spec]
    assert PermGroup(list(cg.tuple), cg.group.degree).order() == ORDERS[spec]


def test_presentation_provenance():
    p = build("2alt:5").provenance
    assert p["relators_verified"] and p["center_order"] == 2
    assert p["central_quotient_satisfies_carmichael"]
    r = build("rel43").provenance
    assert r["perfect"] and r["x_cubed_central_involution"]


def test_central_quotient_check():
    G = build("2alt:4").group
    assert central_quotient_satisfies(G, carmichael_presentation(2))


@pytest.mark.parametrize("name", sorted(BUNDLED))
def test_bundled_presentations_match_builders(name):
    assert bundled_presentation(name) == BUNDLED[name]()


def test_doubled_relators_hold_mod_center():
    assert check_doubled_relators(11)


def test_pair_orbits():
    assert pair_orbit_counts(build("agl1half:11").group) == (2, 1)
    assert pair_orbit_counts(build("agl1half:7").group) == (2, 1)
    assert pair_orbit_counts(build("sym:5").group) == (1, 1)


@pytest.mark.parametrize("text", ["alt", "alt:x", "alt:2", "sym:12", "foo:3", "q8:2", "elemab:2",
                                  "dp:(alt:5)", "sdp:(frob:21,natural)", "dp:(alt:5,cyclic:2"])
def test_bad_specs(text):
    with pytest.raises(SpecError):
        build(text)


def test_spec_round_trip():
    for text in ORDERS:
        assert str(parse_group_spec(text)) == text
    assert str(parse_group_spec(" dp:( alt:5 , q8 ) ")) == "dp:(alt:5,q8)"


def test_parse_char():
    assert parse_char("3").q == 3 and parse_char("2,2").q == 4
    for bad in ("x", "2,2,2", ""):
        with pytest.raises(SpecError):
            parse_char(bad)


def test_module_specs():
    cg = build("alt:5")
    F = GF(3)
    assert build_module(cg, F, "perm").dim == 5
    assert build_module(cg, F, "heart").dim == 4
    assert build_module(cg, F, "tensor:(heart,heart)").dim == 16
    assert build_module(cg, F, "wedge2:perm").dim == 10
    assert build_module(cg, F, "dual:(irr:1)").dim == build_module(cg, F, "irr:1").dim
    assert build_module(cg, F, "regular").dim == 60
    for bad in ("irr:99", "irr:x", "blob", "tensor:perm"):
        with pytest.raises(SpecError):
            build_module(cg, F, bad)


def test_natural_module_of_matrix_group():
    cg = build("frob:21")
    V = build_module(cg, GF(2), "natural")
    assert V.dim == 3 and is_irreducible(V) and endo_degree(V) == 1


def test_d_formula():
    assert d_formula(2, 1, 1) == 2
    assert d_formula(2, 3, 1) == 4
    assert d_formula(2, 3, 3) == 2
    assert d_formula(5, 3, 1) == 5


def test_section7_small_power():
    rep = section7_report("frob:21", 1)
    assert rep.V_dim == 3 and rep.verdict
    assert rep.engine is not None
    assert all(row["agree"] for row in rep.engine["rows"])
    rep3 = section7_report("frob:21", 3, engine_bound=0)
    assert rep3.engine is None
    assert rep3.multiplicity_bound == 6 and rep3.nu2_lower_bound == 2 and rep3.nu2_trivial_max == 1


def test_section7_rejects_modular_characteristic():
    with pytest.raises(SpecError):
        section7_report("sl2:5", 1)
