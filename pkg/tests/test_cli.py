import json
import math

import jsonschema
import pytest

from qonsager.cli import main
from qonsager.reports import Check, SuiteResult, dumps, validate_report, write_report

FAST = ["build-module", "spectrum"]


def run(tmp_path, *args):
    return main([*args, "--out", str(tmp_path), "--no-timing"])


def test_suite_writes_valid_report(tmp_path, capsys):
    assert run(tmp_path, "build-module", "--csv") == 0
    report = json.loads((tmp_path / "build-module.json").read_text())
    validate_report(report)
    assert report["passed"] and report["wall_time"] is None
    assert set(report["artifacts"]) == {"build-module.basis.csv", "build-module.checks.csv",
                                        "build-module.W0.csv", "build-module.W1.csv"}
    assert "PASS build-module" in capsys.readouterr().out


def test_reports_identical_across_workers(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main([*sum([["--suite", s] for s in FAST], []), "--out", str(a), "--no-timing", "--workers", "1"]) == 0
    assert main([*sum([["--suite", s] for s in FAST], []), "--out", str(b), "--no-timing", "--workers", "2"]) == 0
    for s in FAST:
        assert (a / f"{s}.json").read_bytes() == (b / f"{s}.json").read_bytes()


def test_seed_changes_random_suites(tmp_path):
    assert run(tmp_path / "a", "classical-check", "--seed", "1") == 0
    assert run(tmp_path / "b", "classical-check", "--seed", "2") == 0
    ra = json.loads((tmp_path / "a" / "classical-check.json").read_text())
    rb = json.loads((tmp_path / "b" / "classical-check.json").read_text())
    assert ra["seed"] == 1 and rb["seed"] == 2
    assert [c["value"] for c in ra["checks"]] != [c["value"] for c in rb["checks"]]


def test_failing_check_exits_one(tmp_path, capsys):
    assert run(tmp_path, "build-module", "--tol-abs", "1e-300") == 1
    assert "failed:" in capsys.readouterr().out


def test_configuration_errors_exit_two(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"sead": 1}))
    assert run(tmp_path, "build-module", "--config", str(bad)) == 2
    bad.write_text(json.dumps({"suites": {"spectrum": {"nope": 1}}}))
    assert run(tmp_path, "spectrum", "--config", str(bad)) == 2
    assert run(tmp_path, "build-module", "--spins", "1/3") == 2
    assert run(tmp_path) == 2


def test_config_file_selects_and_overrides(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 5, "suites": {"build-module": {"spins": ["1/2", "1/2"]}}}))
    assert run(tmp_path, "--config", str(cfg)) == 0
    report = json.loads((tmp_path / "build-module.json").read_text())
    assert report["seed"] == 5 and report["params"]["spins"] == ["1/2", "1/2"]


def test_dumps_is_deterministic_and_exact():
    obj = {"b": 0.1, "a": [1 + 2j, float("nan")], "c": 1 / 3}
    text = dumps(obj)
    assert text == dumps(obj)
    back = json.loads(text)
    assert list(back) == ["a", "b", "c"] and back["c"] == 1 / 3 and back["a"][0] == [1.0, 2.0]
    assert back["a"][1] == "nan"


def test_schema_rejects_malformed_reports():
    good = SuiteResult("x", {}, [Check("c", 1e-12, 1e-9)], 0, "python").as_dict()
    validate_report(good)
    bad = dict(good, backend="fortran")
    with pytest.raises(jsonschema.ValidationError):
        validate_report(bad)


def test_check_modes():
    assert Check("a", 1.0, 2.0).passed and not Check("a", 3.0, 2.0).passed
    assert Check("a", 3.0, 2.0, "above").passed
    assert Check("a", 4, 4, "equal").passed
    assert not Check("a", math.nan, 1.0).passed


def test_module_entry_point_runs_on_python_backend(tmp_path):
    import os
    import subprocess
    import sys

    env = dict(os.environ, QONSAGER_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-m", "qonsager.cli", "verify-onsager", "--out", str(tmp_path)],
                         env=env, capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    assert json.loads((tmp_path / "verify-onsager.json").read_text())["backend"] == "python"
