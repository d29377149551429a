"""Uniform lattices and real-valued density fields on them."""

import logging
from dataclasses import dataclass
from typing import List

import numpy as np
import pandas as pd

from ..core.exceptions import AliasingError, ConfigException, GridMismatch

logger = logging.getLogger(__name__)

CLIP_THRESHOLD = 1e-12


@dataclass(frozen=True)
class Grid:
    """Lattice x_j = (j - N/2) * spacing, j = 0..N-1, on every axis of [-L, L)^d."""

    d: int
    n: int
    length: float

    def __post_init__(self):
        if self.d < 1 or self.d > 3:
            raise ConfigException(f"Grids are supported for d in 1..3, got {self.d}")
        if self.n < 2 or self.n & (self.n - 1):
            raise ConfigException(f"Points per axis must be a power of two, got {self.n}")
        if self.length <= 0:
            raise ConfigException("Grid extent L must be positive")

    @property
    def spacing(self) -> float:
        return 2.0 * self.length / self.n

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.d

    @property
    def shape(self) -> tuple:
        return (self.n,) * self.d

    @property
    def origin_index(self) -> int:
        return self.n // 2

    def axis(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.spacing

    def mesh(self) -> List[np.ndarray]:
        return np.meshgrid(*([self.axis()] * self.d), indexing="ij")

    def points(self) -> np.ndarray:
        """All nodes as an (N^d, d) array in row-major order."""
        return np.stack([c.ravel() for c in self.mesh()], axis=1)

    def radii(self) -> np.ndarray:
        return np.sqrt(sum(c**2 for c in self.mesh()))

    def frequency_axis(self) -> np.ndarray:
        """Angular frequencies in numpy FFT order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.spacing)

    def frequency_mesh(self) -> List[np.ndarray]:
        return np.meshgrid(*([self.frequency_axis()] * self.d), indexing="ij")

    def frequency_points(self) -> np.ndarray:
        return np.stack([c.ravel() for c in self.frequency_mesh()], axis=1)

    def index_of(self, x: np.ndarray) -> np.ndarray:
        """Fractional node index of coordinates x along each axis."""
        return np.asarray(x, dtype=float) / self.spacing + self.n // 2

    def check_same(self, other: "Grid") -> None:
        if self != other:
            raise GridMismatch(f"Grid mismatch: {self} vs {other}")


@dataclass(frozen=True, eq=False)
class DensityField:
    """Samples of a real density on a Grid (array of shape grid.shape)."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).reshape(self.grid.shape)
        object.__setattr__(self, "values", values)

    @property
    def mass(self) -> float:
        return float(self.grid.cell_volume * self.values.sum())

    @property
    def sup(self) -> float:
        return float(np.abs(self.values).max())

    def clipped(self, threshold: float = CLIP_THRESHOLD, strict: bool = True) -> "DensityField":
        """Zero out round-off negatives above -threshold * max.

        Raises:
            AliasingError: If strict and a larger negative value is present
        """
        peak = self.values.max()
        floor = -threshold * peak
        worst = self.values.min()
        if worst < floor:
            message = (
                f"Field has negative values down to {worst:.3g} "
                f"(max {peak:.3g}); enlarge the grid or refine the spacing"
            )
            if strict:
                raise AliasingError(message)
            logger.warning(message)
        return DensityField(self.grid, np.where((self.values < 0) & (self.values >= floor), 0.0, self.values))

    def at(self, x: np.ndarray) -> np.ndarray:
        """Linear interpolation of the field at points x (shape (k, d) or (k,) in d=1)."""
        x = np.asarray(x, dtype=float).reshape(-1, self.grid.d)
        position = self.grid.index_of(x)
        base = np.floor(position).astype(int)
        frac = position - base
        out = np.zeros(len(x))
        for corner in range(2**self.grid.d):
            offset = np.array([(corner >> k) & 1 for k in range(self.grid.d)])
            idx = base + offset
            weight = np.prod(np.where(offset == 1, frac, 1.0 - frac), axis=1)
            inside = np.all((idx >= 0) & (idx < self.grid.n), axis=1)
            values = np.zeros(len(x))
            values[inside] = self.values[tuple(idx[inside].T)]
            out += weight * values
        return out

    def to_frame(self) -> pd.DataFrame:
        columns = {"x": self.grid.axis()} if self.grid.d == 1 else {
            f"x{k + 1}": c.ravel() for k, c in enumerate(self.grid.mesh())
        }
        columns["value"] = self.values.ravel()
        return pd.DataFrame(columns)
