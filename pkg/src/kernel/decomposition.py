"""Assembly of p_t from its small-jump, Gaussian and compound Poisson factors."""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from ..convolve.fourier import forward, inverse
from ..convolve.grid import DensityField, Grid
from ..convolve.ops import compound_poisson, convolve
from ..convolve.restricted import RestrictedMeasure, sample
from ..core.exceptions import ConfigException
from ..models.levy_model import LevyModel
from ..symbol.maximal import drift_correction, h_of_t
from .exponent_grid import GridExponent, grid_exponent, lattice_compensator
from .field import KernelField
from .oracle import gaussian_kernel
from .spectral import heat_kernel_spectral, small_jump_kernel

logger = logging.getLogger(__name__)

DECOMPOSITION_TOLERANCE = 1e-5
SEMIGROUP_TOLERANCE = 1e-5
COMPARISON_FRACTION = 0.5


@dataclass
class ResidualReport:
    """Sup-norm and mass residuals of an assembled kernel against a reference."""

    name: str
    sup_residual: float
    mass_residual: float
    tolerance: float
    details: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.sup_residual < self.tolerance)

    def to_dict(self) -> Dict[str, float]:
        out = {
            "name": self.name,
            "sup_residual": self.sup_residual,
            "mass_residual": self.mass_residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }
        out.update(self.details)
        return out


def shift_field(values: DensityField, shift: np.ndarray) -> DensityField:
    """Translate a field by `shift` through the phase e^{i<xi, shift>}."""
    if not np.any(shift):
        return values
    grid = values.grid
    mesh = grid.frequency_mesh()
    phase = np.exp(1j * sum(shift[i] * mesh[i] for i in range(grid.d)))
    return DensityField(grid, inverse(forward(values) * phase, grid, "shift"))


def _window(grid: Grid) -> np.ndarray:
    return np.all(np.abs(np.stack(grid.mesh())) <= COMPARISON_FRACTION * grid.length, axis=0)


def _residuals(assembled: np.ndarray, reference: np.ndarray, grid: Grid) -> float:
    window = _window(grid)
    return float(np.abs(assembled - reference)[window].max() / np.abs(reference[window]).max())


def decomposition_check(
    model: LevyModel,
    t: float,
    grid: Grid,
    r: Optional[float] = None,
    tolerance: float = DECOMPOSITION_TOLERANCE,
) -> ResidualReport:
    """Compare the factorized kernel with heat_kernel_spectral on the central half of the box.

    Infinite Levy measures (d = 1) use
    p_t = e^{-t|nu_r|} lambda_t(. - t b_r) + (lambda_t * p_bar_t^r)(. - t b_r)
    with r = h(t) moved to the nearest node, lambda_t the small-jump kernel
    (times g_t when A is elliptic) and p_bar the lattice compound Poisson
    series. Finite measures use p_t = e^{-t|nu|} g_t(. - t b~) + (g_t * p~_t)(. - t b~)
    or, without Gaussian part, compare p~_t and the atom separately.

    Raises:
        ConfigException: If the model has no jump part
    """
    if not model.has_jumps:
        raise ConfigException("The decomposition needs a jump part")
    spectral = heat_kernel_spectral(model, t, grid)
    reference = spectral.corrected().values
    if model.finite:
        return _finite_decomposition(model, t, grid, spectral, reference, tolerance)

    if grid.d != 1:
        raise ConfigException("The small-jump decomposition is computed in d = 1")
    radius = h_of_t(model, t) if r is None else r
    r = max(1, int(round(radius / grid.spacing))) * grid.spacing
    measure = RestrictedMeasure(model, r)
    lam = small_jump_kernel(model, r, t, grid, include_gaussian=model.elliptic)
    p_bar = compound_poisson(
        sample(measure, grid, boundary_weight=True), t, mass_rtol=None, total_mass=measure.mass
    )
    atom_part = np.exp(-t * measure.mass) * lam.values
    assembled = DensityField(grid, atom_part + convolve(lam.field, p_bar).values)
    assembled = shift_field(assembled, t * drift_correction(model, r))
    report = ResidualReport(
        name="decomposition",
        sup_residual=_residuals(assembled.values, reference, grid),
        mass_residual=abs(assembled.mass - spectral.mass),
        tolerance=tolerance,
        details={"r": r, "h_t": radius, "tail_mass": measure.mass, "t": t},
    )
    logger.info(f"Decomposition residual {report.sup_residual:.3e} (t={t}, r={r:.4g})")
    return report


def _finite_decomposition(
    model: LevyModel,
    t: float,
    grid: Grid,
    spectral: KernelField,
    reference: np.ndarray,
    tolerance: float,
) -> ResidualReport:
    jumps = sample(model, grid)
    drift = model.b - lattice_compensator(jumps)
    p_tilde = compound_poisson(jumps, t, mass_rtol=None)
    weight = np.exp(-t * jumps.mass)
    if model.elliptic:
        g_t = DensityField(grid, gaussian_kernel(grid.points(), t, model.A).reshape(grid.shape))
        assembled = DensityField(grid, weight * g_t.values + convolve(g_t, p_tilde).values)
        atom_residual = 0.0
    else:
        assembled = p_tilde
        atom_residual = abs(spectral.atom.weight - weight) + float(
            np.abs(spectral.atom.location - t * drift).max()
        )
    assembled = shift_field(assembled, t * drift)
    report = ResidualReport(
        name="decomposition",
        sup_residual=max(_residuals(assembled.values, reference, grid), atom_residual),
        mass_residual=abs(assembled.mass + (0.0 if model.elliptic else weight) - spectral.mass),
        tolerance=tolerance,
        details={"lattice_mass": jumps.mass, "t": t},
    )
    logger.info(f"Finite decomposition residual {report.sup_residual:.3e} (t={t})")
    return report


def semigroup_check(
    model: LevyModel,
    t: float,
    s: float,
    grid: Grid,
    tolerance: float = SEMIGROUP_TOLERANCE,
    exponent: Optional[GridExponent] = None,
) -> ResidualReport:
    """||p_t * p_s - p_{t+s}||_inf / ||p_{t+s}||_inf on the central half of the box.

    p_t and p_s come from `exponent` (by default the model's exponent built
    for min(t, s)); p_{t+s} is rebuilt from the model for time t + s. The
    product is the zero-padded linear convolution of the image-corrected
    fields.

    Raises:
        ConfigException: If the kernels carry atoms
    """
    exponent = exponent if exponent is not None else grid_exponent(model, grid, min(t, s))
    p_t = heat_kernel_spectral(model, t, grid, exponent)
    p_s = heat_kernel_spectral(model, s, grid, exponent)
    p_ts = heat_kernel_spectral(model, t + s, grid, grid_exponent(model, grid, t + s))
    if p_t.atom is not None or p_ts.atom is not None:
        raise ConfigException("Semigroup checks need kernels without atoms")
    product = convolve(p_t.corrected(), p_s.corrected())
    reference = p_ts.corrected()
    report = ResidualReport(
        name="semigroup",
        sup_residual=_residuals(product.values, reference.values, grid),
        mass_residual=abs(product.mass - reference.mass),
        tolerance=tolerance,
        details={"t": t, "s": s},
    )
    logger.info(f"Semigroup residual {report.sup_residual:.3e} for (t, s) = ({t}, {s})")
    return report
