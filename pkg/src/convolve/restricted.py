"""Restricted Levy measures nu_r = 1_{|y|>=r} nu and sampling onto grids."""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Union

import numpy as np

from ..core.exceptions import ConfigException, NumericalException
from ..models.levy_model import LevyModel, as_points, first_moment, tail_mass
from ..symbol.moments import restricted_exp_moment
from .grid import DensityField, Grid

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RestrictedMeasure:
    """The big-jump measure nu_r(y) = 1_{B(0,r)^c}(y) nu(y) of a model."""

    model: LevyModel
    r: float

    def __post_init__(self):
        if self.r < 0:
            raise ConfigException(f"Cutoff radius must be nonnegative, got {self.r}")
        if self.r == 0 and not self.model.finite:
            raise ConfigException("nu_0 = nu is only a finite measure for finite Levy measures")

    def log_density(self, x: np.ndarray) -> np.ndarray:
        points = as_points(x, self.model.d)
        values = self.model.log_nu(points)
        radius = np.linalg.norm(points, axis=1)
        return np.where(radius >= self.r, values, -np.inf)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return np.exp(self.log_density(x))

    @cached_property
    def mass(self) -> float:
        """|nu_r| by adaptive quadrature."""
        if self.r == 0:
            return float(self.model.mass)
        return tail_mass(self.model, self.r)

    @cached_property
    def compensator(self) -> np.ndarray:
        """int_{r<=|y|<1} y nu(dy) (zero for r >= 1)."""
        if self.r >= 1.0 or self.model.symmetric:
            return np.zeros(self.model.d)
        return first_moment(self.model, self.r, 1.0)


Density = Union[RestrictedMeasure, LevyModel, Callable[[np.ndarray], np.ndarray]]


def sample(
    density: Density,
    grid: Grid,
    exclude_origin: bool = False,
    boundary_weight: bool = False,
) -> DensityField:
    """Sample a density at the grid nodes (midpoints of the lattice cells).

    Args:
        density: RestrictedMeasure, LevyModel (origin excluded) or callable
        grid: Target grid
        exclude_origin: Set the origin node to zero
        boundary_weight: Halve nodes lying on the cutoff sphere |x| = r

    Returns:
        DensityField of the samples

    Raises:
        NumericalException: If a sample is not finite
    """
    points = grid.points()
    if isinstance(density, LevyModel):
        density = density.nu
        exclude_origin = True
    if exclude_origin:
        radius = np.linalg.norm(points, axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            values = np.where(radius > 0, density(np.where(radius[:, None] > 0, points, 1.0)), 0.0)
    else:
        values = np.asarray(density(points), dtype=float)
    bad = ~np.isfinite(values)
    if bad.any():
        node = points[np.argmax(bad)]
        raise NumericalException(f"Density is not finite at grid node {node.tolist()}")
    if boundary_weight and isinstance(density, RestrictedMeasure):
        radius = np.linalg.norm(points, axis=1)
        on_sphere = np.isclose(radius, density.r, rtol=0.0, atol=1e-9 * grid.spacing)
        values = np.where(on_sphere, 0.5 * values, values)
    field = DensityField(grid, values.reshape(grid.shape))
    logger.debug(f"Sampled density on {grid.shape} nodes, mass {field.mass:.10g}")
    return field


def exp_moment_integral(model: LevyModel, r: float, theta: np.ndarray, n: int = 1) -> float:
    """(int e^{kappa <theta, z>} nu_r(z) dz)^n with kappa the model's decay rate.

    Raises:
        ConfigException: If n < 1
        DivergentMoment: If the single integral diverges
    """
    if n < 1:
        raise ConfigException(f"Power n must be at least 1, got {n}")
    theta = np.atleast_1d(np.asarray(theta, dtype=float)).reshape(model.d)
    if model.kappa == 0.0:
        single = RestrictedMeasure(model, r).mass
    else:
        single = restricted_exp_moment(model, model.kappa * theta, r)
    return float(single**n)


def field_exp_moment(field: DensityField, zeta: np.ndarray) -> float:
    """Lattice sum Delta^d sum_j e^{<zeta, x_j>} f_j."""
    zeta = np.atleast_1d(np.asarray(zeta, dtype=float)).reshape(field.grid.d)
    weights = np.exp(field.grid.points() @ zeta).reshape(field.grid.shape)
    return float(field.grid.cell_volume * np.sum(weights * field.values))
