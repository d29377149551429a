"""Scenarios: a model, a list of checks with tolerances and expectations, and their report."""

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from ..checks import CheckContext, CheckResult, clean, get_check
from ..models.families import model_from_config
from ..models.levy_model import LevyModel
from .config import SCENARIO_DIR, load_scenario_config
from .exceptions import ConfigException, NumericalException

logger = logging.getLogger(__name__)

PASSING_STATUSES = ("pass", "demonstrated-fail")


@dataclass(frozen=True)
class CheckSpec:
    """One planned check of a scenario."""

    name: str
    type: str
    provenance: str
    params: Dict[str, Any] = field(default_factory=dict)
    tolerance: Optional[float] = None
    expect: str = "pass"

    @classmethod
    def from_config(cls, section: Dict[str, Any]) -> "CheckSpec":
        tolerance = section.get("tolerance")
        return cls(
            name=str(section["name"]),
            type=str(section["type"]),
            provenance=str(section["provenance"]),
            params=dict(section.get("params") or {}),
            tolerance=None if tolerance is None else float(tolerance),
            expect=section.get("expect", "pass"),
        )


@dataclass(frozen=True)
class Scenario:
    """A named model configuration with its operation plan."""

    name: str
    description: str
    model: Optional[Dict[str, Any]]
    checks: Tuple[CheckSpec, ...]

    @classmethod
    def from_config(cls, config: Dict[str, Any]) -> "Scenario":
        section = config["scenario"]
        return cls(
            name=str(section["name"]),
            description=str(section.get("description", "")),
            model=config.get("model"),
            checks=tuple(CheckSpec.from_config(check) for check in section["checks"]),
        )

    @classmethod
    def load(cls, path: Path) -> "Scenario":
        return cls.from_config(load_scenario_config(path))

    def build_model(self) -> Optional[LevyModel]:
        return None if self.model is None else model_from_config(self.model)


@dataclass
class CheckReport:
    """Status of one check as written to report.json."""

    name: str
    type: str
    status: str
    expect: str
    provenance: str
    tolerance: Optional[float]
    measured: Dict[str, Any]
    runtime: float
    artifacts: List[str] = field(default_factory=list)
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.status in PASSING_STATUSES

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "type": self.type,
            "status": self.status,
            "passed": self.passed,
            "expect": self.expect,
            "provenance": self.provenance,
            "tolerance": self.tolerance,
            "measured": clean(self.measured),
            "runtime_seconds": round(self.runtime, 3),
            "artifacts": self.artifacts,
            "error": self.error,
        }


@dataclass
class ScenarioReport:
    """Per-check statuses of one scenario; the scenario passes when every check does."""

    scenario: str
    description: str
    checks: List[CheckReport] = field(default_factory=list)
    runtime: float = 0.0
    path: Optional[str] = None

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[str]:
        return [check.name for check in self.checks if not check.passed]

    @property
    def errors(self) -> List[str]:
        """Checks stopped by a numerical error."""
        return [check.name for check in self.checks if check.status == "error"]

    @property
    def status(self) -> str:
        if self.errors:
            return "error"
        return "pass" if self.passed else "fail"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scenario": self.scenario,
            "description": self.description,
            "passed": self.passed,
            "status": self.status,
            "runtime_seconds": round(self.runtime, 3),
            "checks": [check.to_dict() for check in self.checks],
        }


def status_of(passed: bool, expect: str) -> str:
    """Map a check outcome and its expectation to a report status."""
    if expect == "fail":
        return "unexpected-pass" if passed else "demonstrated-fail"
    return "pass" if passed else "fail"


def run_check(
    spec: CheckSpec, model: Optional[LevyModel], context: CheckContext
) -> Tuple[CheckReport, Optional[CheckResult]]:
    """Run one check; numerical failures become an "error" status.

    Raises:
        ConfigException: If the check type is unknown or its parameters are invalid
    """
    check = get_check(spec.type)
    tolerance = None if spec.tolerance is None else context.tolerance(spec.tolerance)
    logger.info(f"Running check {spec.name} ({spec.type})")
    start = time.perf_counter()
    try:
        result = check(model, spec.params, tolerance, context)
    except ConfigException:
        raise
    except NumericalException as e:
        logger.warning(f"Check {spec.name} hit a numerical error: {e}")
        report = CheckReport(
            name=spec.name,
            type=spec.type,
            status="error",
            expect=spec.expect,
            provenance=spec.provenance,
            tolerance=tolerance,
            measured={"exception": type(e).__name__},
            runtime=time.perf_counter() - start,
            error=str(e),
        )
        return report, None
    report = CheckReport(
        name=spec.name,
        type=spec.type,
        status=status_of(result.passed, spec.expect),
        expect=spec.expect,
        provenance=spec.provenance,
        tolerance=tolerance,
        measured=result.measured,
        runtime=time.perf_counter() - start,
    )
    logger.info(f"Check {spec.name}: {report.status} in {report.runtime:.2f}s")
    return report, result


def builtin_scenarios(directory: Path = SCENARIO_DIR) -> List[Scenario]:
    """All scenario files of `directory`, ordered by file name.

    Raises:
        ConfigException: If the directory holds no scenarios or a file is invalid
    """
    paths = sorted(Path(directory).glob("*.yml"))
    if not paths:
        raise ConfigException(f"No scenario files found in {directory}")
    scenarios = [Scenario.load(path) for path in paths]
    names = [scenario.name for scenario in scenarios]
    if len(set(names)) != len(names):
        raise ConfigException(f"Duplicate scenario names in {directory}")
    return scenarios


def find_scenario(name: str, directory: Path = SCENARIO_DIR) -> Scenario:
    """Built-in scenario by name, or a scenario file path.

    Raises:
        ConfigException: If no scenario matches
    """
    candidate = Path(name)
    if candidate.suffix in (".yml", ".yaml") and candidate.exists():
        return Scenario.load(candidate)
    for scenario in builtin_scenarios(directory):
        if scenario.name == name:
            return scenario
    raise ConfigException(f"Unknown scenario: {name}")
