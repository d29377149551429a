"""Factory for the artifact exporters of a run."""

import logging
from typing import Any, Dict, Optional, Type

from ..core.exceptions import ExporterException
from .base_exporter import BaseExporter
from .file_exporter import CSVExporter, FieldDumpExporter, JSONExporter

logger = logging.getLogger(__name__)

EXPORTERS: Dict[str, Type[BaseExporter]] = {
    "csv": CSVExporter,
    "json": JSONExporter,
    "field": FieldDumpExporter,
}

# Round-trip precision for tables, readable reports
DEFAULT_SETTINGS: Dict[str, Dict[str, Any]] = {
    "csv": {"float_format": "%.17g", "index": False},
    "json": {"pretty_print": True, "sort_keys": False},
    "field": {},
}


def create_exporter(kind: str, settings: Optional[Dict[str, Any]] = None) -> BaseExporter:
    """Exporter for one artifact kind ("csv", "json" or "field").

    `settings` (the matching section of the general configuration) is
    layered over the defaults of that kind.

    Raises:
        ExporterException: If the kind is unknown
    """
    kind = kind.lower()
    try:
        exporter_class = EXPORTERS[kind]
    except KeyError:
        raise ExporterException(f"Unsupported exporter type: {kind}. Available: {', '.join(EXPORTERS)}")

    merged = {**DEFAULT_SETTINGS[kind], **(settings or {})}
    logger.debug(f"Creating {kind} exporter with {merged}")
    return exporter_class(merged)
