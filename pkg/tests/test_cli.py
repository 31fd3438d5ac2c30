import csv
import json

import pytest

from profgrp.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_enumerate_bundled_and_text(capsys):
    code, data = run_json(capsys, "enumerate", "--bundled", "rel43")
    assert code == 0 and data["order"] == 120
    code, data = run_json(capsys, "enumerate", "--text", "< x, y | x^2, y^3, (x*y)^5 >", "--strategy", "felsch")
    assert data["order"] == 60 and data["strategy"] == "felsch"
    assert all(min(min(c) for c in g) >= 1 for g in data["generators"] if g)


def test_enumerate_subgroup_and_file(capsys, tmp_path):
    f = tmp_path / "d.pres"
    f.write_text("< r, s | r^6, s^2, (s*r)^2 >\n")
    code, out, _ = run(capsys, "enumerate", "--file", str(f), "--subgroup", "r^2")
    assert code == 0 and out.startswith("index 4")


def test_enumerate_overflow_exit_codes(capsys):
    args = ["enumerate", "--bundled", "rel43", "--max-cosets", "10"]
    assert run(capsys, *args)[0] == 2
    code, _, err = run(capsys, *args, "--strict")
    assert code == 3 and "inconclusive" in err


def test_group_command(capsys):
    code, data = run_json(capsys, "group", "--group", "2alt:5")
    assert code == 0 and data["order"] == 120 and data["center_order"] == 2 and data["perfect"]


def test_global_flags_before_subcommand(capsys):
    code, out, _ = run(capsys, "--json", "group", "--group", "q8")
    assert code == 0 and json.loads(out)["order"] == 8


def test_cohomology_command(capsys):
    code, data = run_json(capsys, "cohomology", "--group", "alt:5", "--char", "5", "--module", "heart")
    assert code == 0 and data["h2"] == 1 and data["method"] == "relation-module"
    code, data = run_json(capsys, "cohomology", "--group", "q8", "--char", "2", "--method", "bar")
    assert (data["h0"], data["h1"], data["h2"]) == (1, 2, 2)
    code, data = run_json(capsys, "cohomology", "--group", "alt:5", "--char", "2,2", "--module", "irr:1",
                          "--no-cache")
    assert data["h0"] == 0


def test_bar_method_refuses_large_groups(capsys):
    args = ["cohomology", "--group", "alt:5", "--char", "2", "--method", "bar"]
    assert run(capsys, *args)[0] == 2
    assert run(capsys, *args, "--strict")[0] == 3


def test_irreducibles_command(capsys):
    code, data = run_json(capsys, "irreducibles", "--group", "alt:5", "--char", "2")
    assert data["complete"] and [m["dim"] for m in data["modules"]] == [1, 4, 4]


def test_proficiency_command_with_csv(capsys, tmp_path):
    out = tmp_path / "s5.csv"
    code, data = run_json(capsys, "proficiency", "--group", "sym:5", "--csv", str(out))
    assert code == 0 and data["verdict"] == "proficient" and data["rhat_minus_d"] == 1
    rows = list(csv.DictReader(out.open()))
    assert {r["p"] for r in rows} == {"2", "3", "5"}


def test_proficiency_scale_bound(capsys):
    assert run(capsys, "proficiency", "--group", "alt:7", "--strict")[0] == 3
    code, out, _ = run(capsys, "proficiency", "--group", "alt:7")
    assert code == 0 and "no certificate" in out


def test_battery_command(capsys):
    code, out, _ = run(capsys, "battery", "--filter", "schur-rank.alt-5.*")
    assert code == 0 and "3 passed" in out
    code, data = run_json(capsys, "battery", "--filter", "elemab-cohomology.*", "--audit")
    assert code == 0 and data["counts"]["pass"] == 6 and all(a["match"] for a in data["audit"])


@pytest.mark.parametrize("argv", [["group", "--group", "nosuch:1"],
                                  ["cohomology", "--group", "alt:5", "--char", "x"],
                                  ["cohomology", "--group", "alt:5", "--char", "2", "--module", "irr:9"],
                                  ["enumerate", "--text", "< x | y >"]])
def test_bad_input_exits_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("profgrp:")
