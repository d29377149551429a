"""The exponent psi sampled on the dual grid of a lattice."""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..convolve.fourier import forward
from ..convolve.grid import Grid
from ..convolve.restricted import RestrictedMeasure, sample
from ..core.exceptions import ConfigException
from ..models.levy_model import LevyModel
from ..symbol.closed_forms import closed_form_phi, has_closed_form
from ..symbol.exponent import restricted_phi
from ..symbol.maximal import drift_correction

logger = logging.getLogger(__name__)

TABLE_EPSREL = 1e-13
DECAY_CUT = 40.0
BEYOND_CUT = 1e3


@dataclass(frozen=True, eq=False)
class GridExponent:
    """psi on grid.frequency_mesh(); finite pure-jump models also carry the lattice mass."""

    grid: Grid
    values: np.ndarray
    method: str
    jump_mass: Optional[float] = None
    atom_drift: Optional[np.ndarray] = None


def _gaussian_and_drift(model: LevyModel, grid: Grid) -> np.ndarray:
    mesh = grid.frequency_mesh()
    quadratic = sum(model.A[i, j] * mesh[i] * mesh[j] for i in range(grid.d) for j in range(grid.d))
    linear = sum(model.b[i] * mesh[i] for i in range(grid.d))
    return quadratic - 1j * linear


def small_exponent(
    model: LevyModel, r: float, t: float, xi_max: float
) -> Callable[[np.ndarray], np.ndarray]:
    """int_{|y|<r} (1 - e^{i xi y} + i xi y) nu(y) dy in d = 1, by quadrature at each frequency.

    Frequencies up to the point where t Re reaches 40 (or xi_max) are
    integrated with relative tolerance 1e-13; beyond it the returned
    exponent is large and real. Negative frequencies use
    Phi(-xi) = conj(Phi(xi)).

    Raises:
        ConfigException: If the model is not one-dimensional
    """
    if model.d != 1:
        raise ConfigException("Small-jump exponents are evaluated in d = 1")
    xi_cut = 1.0 / r
    while xi_cut < xi_max:
        value = restricted_phi(model, np.array([xi_cut]), 0.0, r, compensation=r)[0]
        if t * value.real > DECAY_CUT:
            break
        xi_cut *= 2.0
    xi_cut = min(xi_cut, xi_max)

    def evaluate(xi: np.ndarray) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        u = np.abs(xi)
        inside = u <= xi_cut
        nodes, index = np.unique(u[inside], return_inverse=True)
        table = restricted_phi(model, nodes, 0.0, r, compensation=r, epsrel=TABLE_EPSREL)
        logger.debug(f"Small-jump exponent for r={r:.4g}: {len(nodes)} frequencies up to xi={xi_cut:.4g}")
        values = np.full(xi.shape, BEYOND_CUT / t + 0j)
        values[inside] = table.real[index] + 1j * np.sign(xi[inside]) * table.imag[index]
        return values

    return evaluate


def cutoff_node(grid: Grid, radius: float = 1.0) -> float:
    """Grid node radius nearest to `radius` (at least one spacing)."""
    return max(1, int(round(radius / grid.spacing))) * grid.spacing


def lattice_compensator(field, radius: float = 1.0) -> np.ndarray:
    """Delta^d sum_{|x_j| < radius} x_j f_j."""
    points = field.grid.points()
    inside = np.linalg.norm(points, axis=1) < radius
    weights = field.values.ravel()[inside] * field.grid.cell_volume
    return weights @ points[inside]


def grid_exponent(model: LevyModel, grid: Grid, t: float) -> GridExponent:
    """psi = -i<xi,b> + <xi,A xi> + Phi on the frequency mesh of `grid`.

    Closed-form families are evaluated exactly. Finite Levy measures use the
    lattice transform of the sampled density, so that spectral and series
    computations describe the same lattice process. Other one-dimensional
    models use the hybrid exponent: the small-jump part over the node radius
    r0 nearest 1 from a quadrature table, the big-jump part from the sampled
    nu_{r0} with half weights on the cutoff nodes. `t` is the smallest time
    the exponent will be used with.

    Raises:
        ConfigException: If the model needs the hybrid exponent in d >= 2
    """
    if model.d != grid.d:
        raise ConfigException(f"Model dimension {model.d} does not match grid dimension {grid.d}")
    base = _gaussian_and_drift(model, grid)
    if not model.has_jumps:
        return GridExponent(grid=grid, values=base, method="gaussian")
    if has_closed_form(model):
        phi = closed_form_phi(model, grid.frequency_points()).reshape(grid.shape)
        return GridExponent(grid=grid, values=base + phi, method="closed-form")
    if model.finite:
        field = sample(model, grid)
        mass = field.mass
        compensator = lattice_compensator(field)
        mesh = grid.frequency_mesh()
        shift = sum(compensator[i] * mesh[i] for i in range(grid.d))
        values = base + mass - forward(field) + 1j * shift
        logger.debug(f"Finite exponent on the lattice: mass {mass:.10g} (model {model.mass:.10g})")
        return GridExponent(
            grid=grid,
            values=values,
            method="lattice",
            jump_mass=mass,
            atom_drift=model.b - compensator,
        )
    if grid.d != 1:
        raise ConfigException(
            f"Grid kernels of family {model.family} need a closed form in d={grid.d}"
        )
    r0 = cutoff_node(grid)
    measure = RestrictedMeasure(model, r0)
    big = sample(measure, grid, boundary_weight=True)
    xi = grid.frequency_axis()
    small = small_exponent(model, r0, t, float(np.abs(xi).max()))(xi)
    drift = drift_correction(model, r0)
    values = model.A[0, 0] * xi**2 + small + measure.mass - forward(big) - 1j * drift[0] * xi
    return GridExponent(grid=grid, values=values, method="hybrid")
