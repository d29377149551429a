"""File storage for scenario artifacts: out/<scenario>/<check>.csv and report.json."""

import logging
import re
from pathlib import Path
from typing import Any, Dict, List

from ..checks.base import CheckResult
from ..core.exceptions import ExporterException, StorageException
from ..exporters import create_exporter

logger = logging.getLogger(__name__)

REPORT_FILE = "report.json"
SUMMARY_FILE = "summary.json"


def _safe(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", name).strip("_") or "artifact"


class FileStorage:
    """Handles the output directory layout of a run."""

    def __init__(self, config: Dict[str, Any]):
        """Initialize file storage with configuration.

        Args:
            config: Storage configuration dictionary (`output_dir`)
        """
        self.config = config
        self.base_path = Path(config.get("output_dir", "out"))
        self.csv = create_exporter("csv", config.get("csv"))
        self.json = create_exporter("json", config.get("json"))
        self.field = create_exporter("field")

    def scenario_dir(self, scenario: str) -> Path:
        path = self.base_path / _safe(scenario)
        try:
            path.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise StorageException(f"Cannot create output directory {path}: {e}")
        return path

    def save_check(self, scenario: str, check: str, result: CheckResult) -> List[str]:
        """Write the tables and fields of one check.

        The first table is `<check>.csv`; further tables and fields get the
        check name as prefix (`<check>.<table>.csv`, `<check>.<field>.csv/.bin`).

        Returns:
            Paths of the written artifacts

        Raises:
            StorageException: If a file cannot be written
        """
        directory = self.scenario_dir(scenario)
        written = []
        try:
            for k, (name, frame) in enumerate(result.frames.items()):
                stem = _safe(check) if k == 0 else f"{_safe(check)}.{_safe(name)}"
                written.append(self.csv.export(frame, directory / f"{stem}.csv"))
            for name, field in result.fields.items():
                stem = f"{_safe(check)}.{_safe(name)}"
                written.append(self.csv.export(field, directory / f"{stem}.csv"))
                written.append(self.field.export(field, directory / f"{stem}.bin"))
        except ExporterException as e:
            raise StorageException(f"Failed to save artifacts of {scenario}/{check}: {e}")
        return [str(Path(path).relative_to(self.base_path)) for path in written]

    def save_report(self, scenario: str, report: Dict[str, Any]) -> Path:
        """Write out/<scenario>/report.json.

        Raises:
            StorageException: If the report cannot be written
        """
        try:
            return Path(self.json.export(report, self.scenario_dir(scenario) / REPORT_FILE))
        except ExporterException as e:
            raise StorageException(f"Failed to save report of {scenario}: {e}")

    def save_summary(self, summary: Dict[str, Any]) -> Path:
        """Write out/summary.json for multi-scenario runs."""
        try:
            self.base_path.mkdir(parents=True, exist_ok=True)
            return Path(self.json.export(summary, self.base_path / SUMMARY_FILE))
        except (OSError, ExporterException) as e:
            raise StorageException(f"Failed to save run summary: {e}")
