import json

import pytest

from profgrp.battery import BatteryReport, battery, load_manifest, run_claim, select
from profgrp.cache import ResultCache, content_key


def write_manifest(path, claims):
    path.write_text(json.dumps({"version": 1, "claims": claims}))
    return path


SMALL = [
    {"id": "a.order", "kind": "group", "params": {"group": "alt:4"}, "expected": {"order": 12}},
    {"id": "b.wrong", "kind": "group", "params": {"group": "alt:4"}, "expected": {"order": 13}},
    {"id": "c.h2", "kind": "cohomology", "params": {"group": "elemab:2^2", "p": 2, "module": "trivial"},
     "expected": {"h1": 2, "h2": 3}},
    {"id": "d.deep", "kind": "group", "params": {"group": "alt:7"}, "expected": {"order": 2520}, "deep": True},
    {"id": "e.broken", "kind": "group", "params": {"group": "nosuch:3"}, "expected": {"order": 1}},
]


def test_bundled_manifest_ids_unique_and_sorted():
    claims = load_manifest()
    ids = [c["id"] for c in claims]
    assert len(ids) == len(set(ids)) and len(ids) >= 40
    assert all({"id", "kind", "params", "expected"} <= set(c) for c in claims)


def test_duplicate_ids_rejected(tmp_path):
    path = write_manifest(tmp_path / "m.json", [SMALL[0], SMALL[0]])
    with pytest.raises(ValueError):
        load_manifest(path)


def test_statuses_and_exit_codes(tmp_path):
    path = write_manifest(tmp_path / "m.json", SMALL)
    report = battery(manifest=path, cache_dir=tmp_path / "c")
    status = {r["id"]: r["status"] for r in report.rows}
    assert status == {"a.order": "pass", "b.wrong": "fail", "c.h2": "pass", "d.deep": "skipped",
                      "e.broken": "error"}
    assert report.exit_code() == 2
    good = battery(pattern="a.*", manifest=path, cache_dir=tmp_path / "c")
    assert good.exit_code() == 0 and good.counts["pass"] == 1


def test_scale_bound_row_and_strict_exit():
    row = {"id": "x", "status": "scale-bound", "expected": {}, "computed": None}
    report = BatteryReport([row], False, 0)
    assert report.exit_code() == 0 and report.exit_code(strict=True) == 3


def test_select_glob():
    claims = load_manifest()
    heart = select(claims, "heart-h2.*")
    assert heart and all(c["id"].startswith("heart-h2.") for c in heart)
    assert select(claims, None) == claims


def test_only_expected_keys_compared():
    row = run_claim({"id": "g", "kind": "group", "params": {"group": "sym:3"}, "expected": {"order": 6}})
    assert row["computed"] == {"order": 6} and row["status"] == "pass"


def test_report_is_deterministic(tmp_path):
    path = write_manifest(tmp_path / "m.json", SMALL)
    a = battery(manifest=path, cache_dir=tmp_path / "c1").dumps()
    b = battery(manifest=path, cache_dir=tmp_path / "c2").dumps()
    c = battery(manifest=path, cache_dir=tmp_path / "c2").dumps()
    assert a == b == c
    assert "runtime_s" not in a


def test_audit_reproduces_cells(tmp_path):
    path = write_manifest(tmp_path / "m.json", SMALL)
    report = battery(manifest=path, cache_dir=tmp_path / "c", audit=True)
    assert report.audit and all(a["match"] for a in report.audit)


def test_cache_hits_and_disable(tmp_path):
    cache = ResultCache(tmp_path)
    calls = []
    key = content_key("demo", 1)
    assert cache.cell(key, lambda: calls.append(1) or {"v": 1}) == {"v": 1}
    assert cache.cell(key, lambda: calls.append(1) or {"v": 2}) == {"v": 1}
    assert calls == [1] and cache.hits == 1 and cache.misses == 1
    off = ResultCache(tmp_path, enabled=False)
    assert off.cell(key, lambda: {"v": 3}) == {"v": 3}
    assert ResultCache(tmp_path).get(key) == {"v": 1}


def test_content_key_is_order_insensitive_for_dicts():
    assert content_key({"a": 1, "b": 2}) == content_key({"b": 2, "a": 1})
    assert content_key("x", 1) != content_key("x", 2)


def test_audit_detects_corruption(tmp_path):
    cache = ResultCache(tmp_path)
    key = content_key("k")
    cache.cell(key, lambda: 5)
    cache.put(key, 6)
    assert cache.audit(5) == [{"key": key, "match": False}]
