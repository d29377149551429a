"""File exporters for CSV tables, JSON reports and binary field dumps."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np
import pandas as pd

from ..convolve.grid import DensityField, Grid
from ..core.exceptions import ExporterException
from .base_exporter import BaseExporter

logger = logging.getLogger(__name__)

FIELD_DUMP_SUFFIX = ".bin"


class CSVExporter(BaseExporter):
    """Exports DataFrames (or density fields) to CSV files."""

    suffix = ".csv"

    def export(self, data: Union[pd.DataFrame, DensityField], path: Union[str, Path]) -> str:
        """Export a table to CSV.

        Args:
            data: DataFrame, or a DensityField written as coordinate columns plus `value`
            path: Destination file

        Returns:
            Path to exported file
        """
        if isinstance(data, DensityField):
            data = data.to_frame()
        output_path = self.target(path)
        try:
            data.to_csv(
                output_path,
                index=self.config.get("index", False),
                encoding=self.config.get("encoding", "utf-8"),
                sep=self.config.get("sep", ","),
                float_format=self.config.get("float_format", "%.17g"),
            )
        except (OSError, ValueError) as e:
            logger.error(f"Failed to export to CSV: {str(e)}")
            raise ExporterException(f"Failed to write {output_path}: {e}")

        logger.info(f"Exported {len(data)} records to CSV: {output_path}")
        return str(output_path)


class JSONExporter(BaseExporter):
    """Exports dictionaries (reports) or DataFrames to JSON files."""

    suffix = ".json"

    def export(self, data: Union[Dict[str, Any], pd.DataFrame], path: Union[str, Path]) -> str:
        """Export a report dictionary to JSON.

        Args:
            data: JSON-ready dictionary, or a DataFrame exported as records
            path: Destination file

        Returns:
            Path to exported file
        """
        if isinstance(data, pd.DataFrame):
            data = data.to_dict(orient="records")
        output_path = self.target(path)
        try:
            with open(output_path, "w", encoding="utf-8") as f:
                json.dump(
                    data,
                    f,
                    indent=2 if self.config.get("pretty_print", True) else None,
                    ensure_ascii=self.config.get("ensure_ascii", False),
                    sort_keys=self.config.get("sort_keys", False),
                    allow_nan=False,
                )
        except (OSError, TypeError, ValueError) as e:
            logger.error(f"Failed to export to JSON: {str(e)}")
            raise ExporterException(f"Failed to write {output_path}: {e}")

        logger.info(f"Exported JSON report: {output_path}")
        return str(output_path)


class FieldDumpExporter(BaseExporter):
    """Binary dump of a density field.

    Layout (little-endian): int64 d, int64 N per axis (d values), float64
    spacing, then the N^d float64 values in row-major order.
    """

    suffix = FIELD_DUMP_SUFFIX

    def export(self, data: DensityField, path: Union[str, Path]) -> str:
        if not isinstance(data, DensityField):
            raise ExporterException(f"Field dumps need a DensityField, got {type(data).__name__}")
        grid = data.grid
        output_path = self.target(path)
        header = np.array([grid.d] + [grid.n] * grid.d, dtype="<i8")
        try:
            with open(output_path, "wb") as f:
                f.write(header.tobytes())
                f.write(np.array([grid.spacing], dtype="<f8").tobytes())
                f.write(np.ascontiguousarray(data.values, dtype="<f8").tobytes(order="C"))
        except OSError as e:
            raise ExporterException(f"Failed to write {output_path}: {e}")

        logger.info(f"Exported {grid.n ** grid.d} field values to {output_path}")
        return str(output_path)


def read_field_dump(path: Union[str, Path]) -> DensityField:
    """Read a field written by FieldDumpExporter.

    Raises:
        ExporterException: If the file is truncated or its header is inconsistent
    """
    raw = Path(path).read_bytes()
    if len(raw) < 16:
        raise ExporterException(f"Field dump {path} is truncated")
    d = int(np.frombuffer(raw, dtype="<i8", count=1)[0])
    if d < 1 or d > 3:
        raise ExporterException(f"Field dump {path} has invalid dimension {d}")
    sizes = np.frombuffer(raw, dtype="<i8", count=d, offset=8)
    if np.any(sizes != sizes[0]):
        raise ExporterException(f"Field dump {path} has unequal axis sizes {sizes.tolist()}")
    offset = 8 * (d + 1)
    spacing = float(np.frombuffer(raw, dtype="<f8", count=1, offset=offset)[0])
    n = int(sizes[0])
    expected = offset + 8 + 8 * n**d
    if len(raw) != expected:
        raise ExporterException(f"Field dump {path} has {len(raw)} bytes, expected {expected}")
    values = np.frombuffer(raw, dtype="<f8", offset=offset + 8).reshape((n,) * d)
    return DensityField(Grid(d=d, n=n, length=n * spacing / 2.0), values.copy())
