"""Verification pipeline: runs scenarios and writes their artifacts and reports."""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Sequence

from ..checks import CheckContext
from ..storage import FileStorage
from .exceptions import ConfigException, LevyLabException
from .scenarios import Scenario, ScenarioReport, run_check

logger = logging.getLogger(__name__)


def run_scenario(scenario: Scenario, context: CheckContext, storage_config: Dict[str, Any]) -> ScenarioReport:
    """Run every check of a scenario and write out/<scenario>/.

    Module-level so that worker processes can pickle it.

    Raises:
        ConfigException: If the model or a check is misconfigured
        StorageException: If artifacts cannot be written
    """
    storage = FileStorage(storage_config)
    logger.info(f"Starting scenario {scenario.name}")
    start = time.perf_counter()
    model = scenario.build_model()
    report = ScenarioReport(scenario=scenario.name, description=scenario.description)
    for spec in scenario.checks:
        check_report, result = run_check(spec, model, context)
        if result is not None:
            check_report.artifacts = storage.save_check(scenario.name, spec.name, result)
        report.checks.append(check_report)
    report.runtime = time.perf_counter() - start
    report.path = str(storage.save_report(scenario.name, report.to_dict()))
    status = "passed" if report.passed else f"failed ({', '.join(report.failures)})"
    logger.info(f"Scenario {scenario.name} {status} in {report.runtime:.1f}s")
    return report


class VerificationPipeline:
    """Pipeline to run scenarios, in a process pool when jobs > 1."""

    def __init__(self, config: Dict[str, Any]):
        """Initialize the pipeline with configuration.

        Args:
            config: Dictionary containing configuration settings
        """
        self.config = config
        general = config.get("general", {})
        overrides = config.get("overrides", {})
        self.jobs = int(general.get("jobs", 1))
        self.storage_config = {
            "output_dir": general.get("output_dir", "out"),
            "csv": config.get("csv"),
            "json": config.get("json"),
        }
        self.context = CheckContext(
            tolerance_scale=float(overrides.get("tolerance_scale") or 1.0),
            grid_n=overrides.get("grid_n"),
            grid_l=overrides.get("grid_l"),
        )

    def _execute(self, scenarios: Sequence[Scenario]) -> List[ScenarioReport]:
        if self.jobs <= 1 or len(scenarios) <= 1:
            return [run_scenario(scenario, self.context, self.storage_config) for scenario in scenarios]
        logger.info(f"Running {len(scenarios)} scenarios on {self.jobs} workers")
        with ProcessPoolExecutor(max_workers=self.jobs) as pool:
            futures = [pool.submit(run_scenario, s, self.context, self.storage_config) for s in scenarios]
            return [future.result() for future in futures]

    @staticmethod
    def _summary(reports: List[ScenarioReport], failures: List[str]) -> Dict[str, Any]:
        return {
            "passed": not failures,
            "scenarios": [
                {"scenario": r.scenario, "status": r.status, "report": r.path} for r in reports
            ],
        }

    def run(self, scenarios: Sequence[Scenario]) -> Dict[str, Any]:
        """Run the scenarios and summarize them in scenario order.

        Returns:
            Dictionary with `success`, `status` ("pass", "fail" or "error"),
            the scenario reports, the failing scenario names and the scenarios
            whose checks hit numerical errors (these make the status "error")
        """
        try:
            reports = self._execute(scenarios)
            failures = [report.scenario for report in reports if not report.passed]
            if len(reports) > 1:
                FileStorage(self.storage_config).save_summary(self._summary(reports, failures))
        except ConfigException as e:
            logger.error(f"Configuration error: {str(e)}")
            return {"success": False, "status": "error", "error": str(e), "reports": []}
        except LevyLabException as e:
            logger.error(f"Error while running scenarios: {str(e)}")
            return {"success": False, "status": "error", "error": str(e), "reports": []}
        except Exception as e:
            logger.exception(f"Unexpected error in pipeline: {str(e)}")
            return {"success": False, "status": "error", "error": str(e), "reports": []}

        errors = [report.scenario for report in reports if report.errors]
        if errors:
            logger.error(f"Numerical errors in scenarios: {', '.join(errors)}")
        return {
            "success": not failures,
            "status": "error" if errors else ("fail" if failures else "pass"),
            "error": f"numerical errors in {', '.join(errors)}" if errors else None,
            "reports": reports,
            "failures": failures,
            "errors": errors,
        }
