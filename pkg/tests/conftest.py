import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=100, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DEEP = os.environ.get("PROFGRP_DEEP", "1") != "0"


def pytest_collection_modifyitems(config, items):
    if DEEP:
        return
    skip = pytest.mark.skip(reason="order-2520 computation disabled by PROFGRP_DEEP=0")
    for item in items:
        if "deep" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("PROFGRP_CACHE_DIR", str(tmp_path / "cache"))


_CRITERIA: dict[int, list[str]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    number = getattr(report, "criterion", None)
    if number is not None:
        _CRITERIA.setdefault(number, []).append(report.outcome)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = marker.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        outcomes = _CRITERIA[number]
        ran = [o for o in outcomes if o != "skipped"]
        if not ran:
            verdict = "SKIP"
        else:
            verdict = "PASS" if all(o == "passed" for o in ran) else "FAIL"
        passed = sum(o == "passed" for o in outcomes)
        skipped = len(outcomes) - len(ran)
        note = f", {skipped} skipped" if skipped else ""
        terminalreporter.write_line(f"criterion {number:>2}: {verdict}  ({passed}/{len(outcomes)} checks passed{note})")
