"""Check-report formatting and the named battery registry."""

import json

import numpy as np
import pytest

from toda2 import (
    BATTERY_NAMES,
    CheckReport,
    all_pass,
    build_sl,
    emit_report,
    expected_rank,
    run_battery,
)


def test_line_format():
    r = CheckReport(
        check="demo",
        anchor="unit",
        algebra="sl2",
        params={"samples": 3},
        measured=1.5e-12,
        expected=1e-11,
        verdict=True,
        detail="spot",
    )
    line = r.line()
    assert line.startswith("[PASS] demo")
    assert "sl2" in line and "(unit)" in line and "spot" in line
    bad = CheckReport(check="demo", anchor="unit", algebra="sl2", verdict=False)
    assert bad.line().startswith("[FAIL]")


def test_all_pass():
    good = CheckReport(check="a", anchor="x", algebra="sl2", verdict=True)
    bad = CheckReport(check="b", anchor="x", algebra="sl2", verdict=False)
    assert all_pass([good])
    assert not all_pass([good, bad])
    assert all_pass([])


def test_emit_text_summary_line():
    rs = [
        CheckReport(check="a", anchor="x", algebra="sl2", verdict=True),
        CheckReport(check="b", anchor="x", algebra="sl2", verdict=True),
    ]
    out = emit_report(rs, "text")
    assert out.splitlines()[-1] == "-- 2 checks, all passed"
    rs[1] = CheckReport(check="b", anchor="x", algebra="sl2", verdict=False)
    out = emit_report(rs, "text")
    assert out.splitlines()[-1] == "-- 2 checks, 1 FAILED"


def test_emit_json_is_plain_and_deterministic(sl2):
    reports = run_battery("mcybe", sl2, samples=10)
    s1 = emit_report(reports, "json")
    s2 = emit_report(run_battery("mcybe", sl2, samples=10), "json")
    assert s1 == s2  # same seed, same bytes
    doc = json.loads(s1)
    assert doc["all_pass"] is True
    assert all("check" in r and "verdict" in r for r in doc["reports"])
    # numpy scalars must have been converted: round-trip through json is exact
    assert json.dumps(doc, sort_keys=True, indent=2) == s1


def test_emit_rejects_unknown_format():
    with pytest.raises(ValueError):
        emit_report([], "yaml")


def test_battery_registry(sl2):
    assert "mcybe" in BATTERY_NAMES and "toda" in BATTERY_NAMES
    with pytest.raises(KeyError):
        run_battery("nonsense", sl2)
    reports = run_battery("casimir", sl2, samples=5)
    assert reports and all(r.verdict for r in reports)


def test_expected_rank_closed_forms(desk_algebras):
    want = {"sl2": 4, "sl3": 10, "sl4": 18, "gl2": 4, "gl3": 10}
    for name, alg in desk_algebras.items():
        assert expected_rank(alg) == want[name]
