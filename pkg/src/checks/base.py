"""Check results and the settings every check receives."""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from ..convolve.grid import DensityField, Grid

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    """Outcome of one check: pass flag, measured values and tabular artifacts."""

    passed: bool
    measured: Dict[str, Any] = field(default_factory=dict)
    frames: Dict[str, pd.DataFrame] = field(default_factory=dict)
    fields: Dict[str, DensityField] = field(default_factory=dict)


@dataclass(frozen=True)
class CheckContext:
    """Run-wide overrides: tolerance scaling and grid sizes."""

    tolerance_scale: float = 1.0
    grid_n: Optional[int] = None
    grid_l: Optional[float] = None

    def tolerance(self, value: float) -> float:
        return float(value) * self.tolerance_scale

    def grid(self, section: Optional[Dict[str, Any]], d: int, n: int = 2**12, length: float = 64.0) -> Grid:
        """Grid from a check's `grid` section, with the CLI overrides applied."""
        section = section or {}
        return Grid(
            d=d,
            n=int(self.grid_n or section.get("n", n)),
            length=float(self.grid_l or section.get("length", length)),
        )


def as_vector(value: Any, d: int) -> np.ndarray:
    """Config value (scalar or list) as a vector of R^d."""
    return np.atleast_1d(np.asarray(value, dtype=float)).reshape(d)


def clean(value: Any) -> Any:
    """numpy scalars and arrays as plain JSON values."""
    if isinstance(value, dict):
        return {key: clean(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [clean(item) for item in value]
    if isinstance(value, np.ndarray):
        return clean(value.tolist())
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not np.isfinite(value):
        return None if np.isnan(value) else ("inf" if value > 0 else "-inf")
    return value
