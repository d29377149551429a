"""Heat-kernel fields on grids."""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import pandas as pd

from ..convolve.grid import DensityField, Grid

logger = logging.getLogger(__name__)

PROVENANCES = ("spectral", "decomposition", "oracle", "small-jump", "compound")
MASS_TOLERANCE = 1e-6


@dataclass(frozen=True)
class Atom:
    """Point mass `weight` at `location` (finite Levy measure without Gaussian part)."""

    weight: float
    location: np.ndarray


@dataclass(frozen=True, eq=False)
class KernelField:
    """Density of P_t (or one of its factors) sampled on a grid.

    Spectral fields are periodized over the box [-L, L)^d; `image_correction`,
    when set, returns the periodization error to subtract at given points.
    """

    field: DensityField
    t: float
    provenance: str
    atom: Optional[Atom] = None
    image_correction: Optional[Callable[[np.ndarray], np.ndarray]] = None

    @property
    def grid(self) -> Grid:
        return self.field.grid

    @property
    def values(self) -> np.ndarray:
        return self.field.values

    @property
    def mass(self) -> float:
        """Mass of the absolutely continuous part plus the atom."""
        return self.field.mass + (self.atom.weight if self.atom else 0.0)

    @property
    def mass_defect(self) -> float:
        return abs(self.mass - 1.0)

    @property
    def mass_ok(self) -> bool:
        """Whether the total mass is 1 within MASS_TOLERANCE."""
        return bool(self.mass_defect <= MASS_TOLERANCE)

    def value_at(self, x: np.ndarray) -> np.ndarray:
        """Interpolated density at points x with images removed."""
        points = np.asarray(x, dtype=float).reshape(-1, self.grid.d)
        values = self.field.at(points)
        if self.image_correction is not None:
            values = values - self.image_correction(points)
        return values

    def corrected(self) -> DensityField:
        """Node values with images removed."""
        if self.image_correction is None:
            return self.field
        correction = self.image_correction(self.grid.points()).reshape(self.grid.shape)
        return DensityField(self.grid, self.values - correction)

    def to_frame(self) -> pd.DataFrame:
        frame = self.field.to_frame()
        frame.attrs.update({"t": self.t, "provenance": self.provenance})
        return frame
