"""Command-line entry point: exit codes 0 (pass) / 1 (failed check) / 2 (usage)."""

import json

import pytest

from toda2 import load_spec
from toda2.cli import main


def test_algebra_build_prints_document(capsys):
    assert main(["algebra", "build", "sl2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["name"] == "sl2" and doc["dim"] == 3


def test_algebra_build_writes_loadable_spec(tmp_path, capsys):
    out = tmp_path / "gl2.json"
    assert main(["algebra", "build", "gl2", "--out", str(out)]) == 0
    capsys.readouterr()
    alg = load_spec(out)
    assert alg.name == "gl2" and alg.associative


def test_algebra_validate(capsys, tmp_path):
    assert main(["algebra", "validate", "sl3"]) == 0
    assert "invariants hold" in capsys.readouterr().out
    # a spec file can be named instead of a builder token
    out = tmp_path / "sl2.json"
    main(["algebra", "build", "sl2", "--out", str(out)])
    capsys.readouterr()
    assert main(["algebra", "validate", str(out)]) == 0


def test_check_pass_and_fail_exit_codes(capsys):
    assert main(["check", "mcybe", "--algebra", "sl2", "--samples", "30"]) == 0
    assert "[PASS]" in capsys.readouterr().out
    # an absurd tolerance forces a FAIL and exit code 1 — checks still run
    assert main(["check", "mcybe", "--algebra", "sl2", "--tol", "1e-30"]) == 1
    assert "[FAIL]" in capsys.readouterr().out


def test_check_rejects_unknown_battery():
    with pytest.raises(SystemExit) as ex:
        main(["check", "nonsense"])
    assert ex.value.code == 2


def test_unknown_algebra_is_usage_error(capsys):
    assert main(["algebra", "build", "xyz9"]) == 2
    assert "error" in capsys.readouterr().err


def test_check_json_output_is_deterministic(capsys):
    args = ["check", "casimir", "--algebra", "sl2", "--format", "json"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    second = capsys.readouterr().out
    assert first == second
    doc = json.loads(first)
    assert doc["all_pass"] is True


def test_check_out_file(tmp_path, capsys):
    out = tmp_path / "report.txt"
    assert main(["check", "rank", "--algebra", "gl2", "--out", str(out)]) == 0
    capsys.readouterr()
    text = out.read_text()
    assert "[PASS]" in text and "rank" in text


def test_check_multiple_algebras(capsys):
    assert main(["check", "mcybe", "--algebra", "sl2", "--algebra", "gl2",
                 "--samples", "20"]) == 0
    out = capsys.readouterr().out
    assert "sl2" in out and "gl2" in out


def test_flow_run_with_csv(tmp_path, capsys):
    csv = tmp_path / "traj.csv"
    code = main([
        "flow", "run", "--algebra", "sl2", "--field", "t",
        "--dt", "0.01", "--T", "0.2", "--csv", str(csv),
    ])
    assert code == 0
    assert "[PASS]" in capsys.readouterr().out
    assert csv.read_text().splitlines()[0].startswith("t, x_1")


def test_flow_commutation(capsys):
    assert main(["flow", "commutation", "--algebra", "sl2", "--steps", "40"]) == 0
    assert "[PASS]" in capsys.readouterr().out


def test_full_battery_runs(capsys):
    assert main(["check", "all", "--algebra", "sl2", "--samples", "10"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[-1].endswith("all passed")
