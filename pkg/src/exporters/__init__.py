"""Exporter modules for CSV tables, JSON reports and binary field dumps."""

from .base_exporter import BaseExporter
from .exporter_factory import create_exporter
from .file_exporter import CSVExporter, FieldDumpExporter, JSONExporter, read_field_dump

__all__ = [
    "BaseExporter",
    "CSVExporter",
    "JSONExporter",
    "FieldDumpExporter",
    "create_exporter",
    "read_field_dump",
]
