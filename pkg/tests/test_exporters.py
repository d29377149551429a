import json

import numpy as np
import pandas as pd
import pytest
from numpy.testing import assert_array_equal

from src.checks.base import CheckResult
from src.convolve import DensityField, Grid
from src.core.exceptions import ExporterException
from src.exporters import CSVExporter, FieldDumpExporter, create_exporter, read_field_dump
from src.storage import REPORT_FILE, FileStorage


@pytest.fixture
def field_2d():
    grid = Grid(2, 8, 2.0)
    values = np.arange(64, dtype=float).reshape(8, 8) / 7.0
    return DensityField(grid, values)


def test_factory_types():
    assert isinstance(create_exporter("CSV"), CSVExporter)
    assert isinstance(create_exporter("field"), FieldDumpExporter)
    with pytest.raises(ExporterException):
        create_exporter("xlsx")


def test_field_dump_round_trip(tmp_path, field_2d):
    path = create_exporter("field").export(field_2d, tmp_path / "kernel")
    assert path.endswith(".bin")
    loaded = read_field_dump(path)
    assert loaded.grid == field_2d.grid
    assert_array_equal(loaded.values, field_2d.values)


def test_field_dump_header_layout(tmp_path, field_2d):
    path = create_exporter("field").export(field_2d, tmp_path / "kernel.bin")
    raw = open(path, "rb").read()
    assert np.frombuffer(raw, dtype="<i8", count=3).tolist() == [2, 8, 8]
    assert np.frombuffer(raw, dtype="<f8", count=1, offset=24)[0] == field_2d.grid.spacing
    assert len(raw) == 32 + 8 * 64


def test_truncated_field_dump(tmp_path, field_2d):
    path = tmp_path / "kernel.bin"
    create_exporter("field").export(field_2d, path)
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(ExporterException):
        read_field_dump(path)
    path.write_bytes(b"\x01")
    with pytest.raises(ExporterException):
        read_field_dump(path)


def test_field_dump_needs_a_field(tmp_path):
    with pytest.raises(ExporterException):
        create_exporter("field").export(pd.DataFrame({"x": [1.0]}), tmp_path / "table")


def test_csv_field_columns(tmp_path, field_2d):
    path = create_exporter("csv").export(field_2d, tmp_path / "kernel")
    frame = pd.read_csv(path)
    assert list(frame.columns) == ["x1", "x2", "value"]
    assert len(frame) == 64
    assert frame["value"].iloc[-1] == pytest.approx(63 / 7.0, rel=1e-15)


def test_json_rejects_nan(tmp_path):
    with pytest.raises(ExporterException):
        create_exporter("json").export({"value": float("nan")}, tmp_path / "report")


def test_storage_layout(tmp_path, field_2d):
    storage = FileStorage({"output_dir": str(tmp_path / "out")})
    result = CheckResult(
        passed=True,
        measured={"max_error": 0.0},
        frames={"series": pd.DataFrame({"s": [1.0, 2.0]}), "extra": pd.DataFrame({"a": [0]})},
        fields={"kernel_t1": field_2d},
    )
    written = storage.save_check("demo scenario", "kernel ratio", result)
    assert written == [
        "demo_scenario/kernel_ratio.csv",
        "demo_scenario/kernel_ratio.extra.csv",
        "demo_scenario/kernel_ratio.kernel_t1.csv",
        "demo_scenario/kernel_ratio.kernel_t1.bin",
    ]
    report = storage.save_report("demo scenario", {"scenario": "demo scenario", "passed": True})
    assert report.name == REPORT_FILE
    assert json.loads(report.read_text())["passed"] is True
