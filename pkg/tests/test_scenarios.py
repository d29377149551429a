import json

import pytest
import yaml

from src.__main__ import EXIT_ERROR, EXIT_FAIL, EXIT_PASS, run
from src.checks import CheckContext
from src.core.exceptions import ConfigException
from src.core.pipeline import VerificationPipeline
from src.core.scenarios import CheckSpec, Scenario, run_check, status_of


def _classify_scenario(name, expected, delta=2.0):
    params = {"m": 1.0, "beta": 1.0, "delta": delta, "d": 1, "expected": expected}
    spec = CheckSpec(name="classify", type="classify", provenance="DERIVED: profile test", params=params)
    return Scenario(name=name, description="classification only", model=None, checks=(spec,))


@pytest.mark.parametrize(
    "passed, expect, status",
    [
        (True, "pass", "pass"),
        (False, "pass", "fail"),
        (False, "fail", "demonstrated-fail"),
        (True, "fail", "unexpected-pass"),
    ],
)
def test_status_of(passed, expect, status):
    assert status_of(passed, expect) == status


def _compound_ratio_scenario(path, t):
    scenario = {
        "scenario": {
            "name": "tiny_time",
            "checks": [
                {
                    "name": "ratio",
                    "type": "kernel_ratio",
                    "params": {"t": t, "theta": [1.0]},
                    "provenance": "DERIVED: single big jump",
                }
            ],
        },
        "model": {"family": "compound-poisson", "d": 1, "m": 1.0, "delta": 2.0, "rate": 1.0},
    }
    path.write_text(yaml.safe_dump(scenario))
    return path


def test_numerical_errors_become_error_status(pure_compound, output_dir, tmp_path):
    # Psi is bounded for a finite measure, so h(t) has no value at small t
    spec = CheckSpec(name="ratio", type="kernel_ratio", provenance="DERIVED: x", params={"t": 1e-3, "theta": [1.0]})
    report, result = run_check(spec, pure_compound, CheckContext())
    assert result is None
    assert report.status == "error"
    assert not report.passed
    assert report.error

    path = _compound_ratio_scenario(tmp_path / "tiny_time.yml", 1e-3)
    assert run(["verify", str(path), "--out", str(output_dir)]) == EXIT_ERROR
    saved = json.loads((output_dir / "tiny_time" / "report.json").read_text())
    assert saved["status"] == "error"
    assert saved["checks"][0]["status"] == "error"


def test_pipeline_reports_numerical_errors(pure_compound, tmp_path):
    spec = CheckSpec(name="ratio", type="kernel_ratio", provenance="DERIVED: x", params={"t": 1e-3, "theta": [1.0]})
    broken = Scenario(name="tiny_time", description="", model=pure_compound.to_config(), checks=(spec,))
    config = {"general": {"output_dir": str(tmp_path / "out"), "jobs": 1}, "overrides": {}}
    result = VerificationPipeline(config).run([broken, _classify_scenario("exp_ok", "EXP_OK")])
    assert result["status"] == "error"
    assert result["errors"] == ["tiny_time"]
    assert [report.scenario for report in result["reports"]] == ["tiny_time", "exp_ok"]
    summary = json.loads((tmp_path / "out" / "summary.json").read_text())
    assert [entry["status"] for entry in summary["scenarios"]] == ["error", "pass"]


def test_config_errors_propagate():
    spec = CheckSpec(name="mystery", type="mystery", provenance="DERIVED: x")
    with pytest.raises(ConfigException):
        run_check(spec, None, CheckContext())
    with pytest.raises(ConfigException):
        run_check(CheckSpec(name="mass", type="mass", provenance="DERIVED: x"), None, CheckContext())


def test_pipeline_writes_reports(tmp_path):
    config = {"general": {"output_dir": str(tmp_path / "out"), "jobs": 1}, "overrides": {}}
    scenarios = [_classify_scenario("exp_ok", "EXP_OK"), _classify_scenario("wrong", "POLY_OK")]
    result = VerificationPipeline(config).run(scenarios)
    assert result["status"] == "fail"
    assert result["failures"] == ["wrong"]

    report = json.loads((tmp_path / "out" / "exp_ok" / "report.json").read_text())
    assert report["passed"] is True
    assert report["checks"][0]["status"] == "pass"
    assert report["checks"][0]["artifacts"] == ["exp_ok/classify.csv"]
    summary = json.loads((tmp_path / "out" / "summary.json").read_text())
    assert [entry["status"] for entry in summary["scenarios"]] == ["pass", "fail"]


def test_pipeline_reports_config_errors(tmp_path):
    spec = CheckSpec(name="mass", type="mass", provenance="DERIVED: x")
    scenario = Scenario(name="broken", description="", model=None, checks=(spec,))
    result = VerificationPipeline({"general": {"output_dir": str(tmp_path)}, "overrides": {}}).run([scenario])
    assert result["status"] == "error"


def test_cli_classify(output_dir):
    assert run(["classify", "--m", "1", "--beta", "1", "--delta", "1", "--d", "2", "--out", str(output_dir)]) == EXIT_PASS
    report = json.loads((output_dir / "classify" / "report.json").read_text())
    assert report["checks"][0]["measured"]["verdicts"] == ["FAILS"]


def test_cli_failing_scenario_file(output_dir, tmp_path):
    scenario = {
        "scenario": {
            "name": "wrong_verdict",
            "checks": [
                {
                    "name": "classify",
                    "type": "classify",
                    "params": {"m": 0.0, "beta": 0.0, "delta": 0.5, "d": 1, "expected": "POLY_OK"},
                    "provenance": "DERIVED: delta <= d is not integrable",
                }
            ],
        },
        "model": None,
    }
    path = tmp_path / "wrong_verdict.yml"
    path.write_text(yaml.safe_dump(scenario))
    assert run(["verify", str(path), "--out", str(output_dir)]) == EXIT_FAIL
    assert (output_dir / "wrong_verdict" / "report.json").exists()


def test_cli_expected_failure_passes(output_dir, tmp_path):
    scenario = {
        "scenario": {
            "name": "demonstration",
            "checks": [
                {
                    "name": "classify",
                    "type": "classify",
                    "params": {"m": 0.0, "beta": 0.0, "delta": 0.5, "d": 1, "expected": "POLY_OK"},
                    "provenance": "DERIVED: delta <= d is not integrable",
                    "expect": "fail",
                }
            ],
        },
        "model": None,
    }
    path = tmp_path / "demonstration.yml"
    path.write_text(yaml.safe_dump(scenario))
    assert run(["verify", str(path), "--out", str(output_dir)]) == EXIT_PASS
    report = json.loads((output_dir / "demonstration" / "report.json").read_text())
    assert report["checks"][0]["status"] == "demonstrated-fail"


@pytest.mark.parametrize(
    "argv",
    [
        ["classify", "--m", "1", "--beta", "1", "--d", "1"],
        ["verify", "no_such_scenario"],
        ["psi"],
        ["verify", "all", "--tolerance-scale", "0"],
    ],
)
def test_cli_configuration_errors(output_dir, argv):
    assert run(argv + ["--out", str(output_dir)]) == EXIT_ERROR


def test_cli_environment_output_dir(output_dir, monkeypatch, tmp_path):
    target = tmp_path / "env-out"
    monkeypatch.setenv("LEVYLAB_OUTPUT_DIR", str(target))
    assert run(["classify", "--m", "0", "--beta", "0", "--delta", "2", "--d", "1"]) == EXIT_PASS
    assert (target / "classify" / "classify.csv").exists()
