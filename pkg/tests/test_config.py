import pytest
import yaml

from src.core.config import OUTPUT_DIR_ENV, apply_overrides, load_config, load_scenario_config
from src.core.exceptions import ConfigException
from src.core.scenarios import builtin_scenarios, find_scenario

BUILTIN_NAMES = {
    "cauchy_oracle",
    "stable1d",
    "stable2d_quadrants",
    "relativistic1d",
    "stretched_exp1d",
    "exponential_tempered1d",
    "compound_poisson_jump_diffusion",
    "compound_poisson_pure",
    "counterexample_no_K",
    "invariant_suite",
}


def _write(path, data):
    path.write_text(yaml.safe_dump(data))
    return path


def test_default_config(monkeypatch):
    monkeypatch.delenv(OUTPUT_DIR_ENV, raising=False)
    config = load_config()
    assert config["general"]["output_dir"] == "out"
    assert config["general"]["jobs"] == 1
    assert config["overrides"]["tolerance_scale"] == 1.0
    assert config["csv"]["float_format"] == "%.17g"


def test_environment_sets_output_dir(monkeypatch, tmp_path):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path / "runs"))
    assert load_config()["general"]["output_dir"] == str(tmp_path / "runs")


def test_cli_overrides_win(monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, "from-env")
    config = apply_overrides(load_config(), output_dir="from-cli", tolerance_scale=2.0, grid_n=None)
    assert config["general"]["output_dir"] == "from-cli"
    assert config["overrides"]["tolerance_scale"] == 2.0
    assert config["overrides"]["grid_n"] is None


def test_invalid_tolerance_scale():
    with pytest.raises(ConfigException):
        apply_overrides(load_config(), tolerance_scale=-1.0)


def test_invalid_config_file(tmp_path):
    with pytest.raises(ConfigException):
        load_config(tmp_path / "missing.yml")
    with pytest.raises(ConfigException):
        load_config(_write(tmp_path / "no_general.yml", {"overrides": {}}))
    with pytest.raises(ConfigException):
        load_config(_write(tmp_path / "jobs.yml", {"general": {"jobs": 0}}))
    broken = tmp_path / "broken.yml"
    broken.write_text("general: [unclosed")
    with pytest.raises(ConfigException):
        load_config(broken)


@pytest.mark.parametrize(
    "check",
    [
        {"type": "mass", "provenance": "DERIVED: x"},
        {"name": "mass", "provenance": "DERIVED: x"},
        {"name": "mass", "type": "mass"},
        {"name": "mass", "type": "mass", "provenance": "DERIVED: x", "tolerance": 0},
        {"name": "mass", "type": "mass", "provenance": "DERIVED: x", "expect": "maybe"},
    ],
)
def test_scenario_validation(tmp_path, check):
    path = _write(tmp_path / "bad.yml", {"scenario": {"name": "bad", "checks": [check]}, "model": None})
    with pytest.raises(ConfigException):
        load_scenario_config(path)


def test_scenario_needs_model_section(tmp_path):
    check = {"name": "mass", "type": "mass", "provenance": "DERIVED: x"}
    with pytest.raises(ConfigException):
        load_scenario_config(_write(tmp_path / "bad.yml", {"scenario": {"name": "bad", "checks": [check]}}))


def test_builtin_scenarios():
    scenarios = builtin_scenarios()
    assert {scenario.name for scenario in scenarios} == BUILTIN_NAMES
    for scenario in scenarios:
        assert scenario.checks
        for spec in scenario.checks:
            assert spec.provenance.split(":")[0] in ("DERIVED", "ASYMPTOTIC")
        scenario.build_model()


def test_counterexample_demonstrates_failures():
    scenario = find_scenario("counterexample_no_K")
    expectations = {spec.name: spec.expect for spec in scenario.checks}
    assert expectations["classify"] == "pass"
    assert expectations["kfunction_diverges"] == "fail"
    assert "K_INFINITE" in scenario.build_model().flags


def test_unknown_scenario():
    with pytest.raises(ConfigException):
        find_scenario("no_such_scenario")


def test_cauchy_semigroup_pairs():
    checks = {spec.name: spec for spec in find_scenario("cauchy_oracle").checks}
    assert checks["semigroup"].params["pairs"] == [[0.25, 0.25], [0.5, 1.0]]
