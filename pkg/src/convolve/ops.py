"""Lattice convolutions: pairwise, n-fold and compound Poisson series."""

import logging
from math import lgamma
from typing import Optional

import numpy as np
from scipy.special import gammainc

from ..core.exceptions import AliasingError, ConfigException
from .fourier import forward, inverse
from .grid import DensityField

logger = logging.getLogger(__name__)

NFOLD_MASS_RTOL = 1e-6
SERIES_TOLERANCE = 1e-12
MAX_SERIES_TERMS = 500


def convolve(a: DensityField, b: DensityField) -> DensityField:
    """Linear (zero-padded) convolution of two fields on the same grid.

    Raises:
        GridMismatch: If the fields live on different grids
    """
    a.grid.check_same(b.grid)
    grid = a.grid
    size = (2 * grid.n,) * grid.d
    full = np.fft.irfftn(np.fft.rfftn(a.values, size) * np.fft.rfftn(b.values, size), size)
    window = tuple(slice(grid.n // 2, grid.n // 2 + grid.n) for _ in range(grid.d))
    return DensityField(grid, grid.cell_volume * full[window]).clipped()


def nfold(field: DensityField, n: int, mass_rtol: Optional[float] = NFOLD_MASS_RTOL) -> DensityField:
    """n-fold self-convolution by repeated squaring (`mass_rtol=None` skips the mass check).

    Raises:
        ConfigException: If n < 1
        AliasingError: If the mass deviates from mass(field)^n by more than mass_rtol
    """
    if n < 1:
        raise ConfigException(f"nfold needs n >= 1, got {n}")
    result: Optional[DensityField] = None
    power = field
    k = n
    while k:
        if k & 1:
            result = power if result is None else convolve(result, power)
        k >>= 1
        if k:
            power = convolve(power, power)
    expected = field.mass**n
    if mass_rtol is not None and expected > 0 and abs(result.mass / expected - 1.0) > mass_rtol:
        raise AliasingError(
            f"{n}-fold convolution lost mass: {result.mass:.12g} vs {expected:.12g}; "
            "enlarge the grid extent L"
        )
    return result


def compound_poisson(
    field: DensityField,
    t: float,
    tolerance: float = SERIES_TOLERANCE,
    extra_terms: int = 0,
    mass_rtol: Optional[float] = NFOLD_MASS_RTOL,
    total_mass: Optional[float] = None,
) -> DensityField:
    """e^{-t M} sum_{n>=1} t^n nu^{n*} / n! for a sampled finite measure of mass M.

    The series stops once the Poisson tail bound
    (sup nu / M) * P(N > n) falls below `tolerance` times the partial sup.
    `total_mass` replaces the lattice mass M in the prefactor e^{-t M} when
    the sampled field misses part of a measure, such as jumps beyond the box.

    Raises:
        ConfigException: If t <= 0
        AliasingError: If a series term loses mass on the grid
    """
    if t <= 0:
        raise ConfigException(f"Time must be positive, got {t}")
    mass = field.mass
    lam = t * mass
    sup_ratio = field.sup / mass if mass > 0 else 0.0
    term = DensityField(field.grid, t * field.values)
    total = term.values.copy()
    n = 1

    def next_term(term: DensityField, n: int) -> DensityField:
        term = DensityField(field.grid, convolve(term, field).values * t / n)
        expected = np.exp(n * np.log(lam) - lgamma(n + 1)) if lam > 0 else 0.0
        if mass_rtol is not None and expected > 1e-300:
            if abs(term.mass / expected - 1.0) > mass_rtol:
                raise AliasingError(f"Series term {n} lost mass on the grid; enlarge L")
        return term

    while n < MAX_SERIES_TERMS:
        remaining = sup_ratio * gammainc(n + 1, lam)
        if remaining <= tolerance * np.exp(-lam) * np.abs(total).max():
            break
        n += 1
        term = next_term(term, n)
        total += term.values
    for _ in range(extra_terms):
        n += 1
        term = next_term(term, n)
        total += term.values
    logger.debug(f"Compound Poisson series used {n} terms (t|nu|={lam:.4g})")
    prefactor = np.exp(-t * total_mass) if total_mass is not None else np.exp(-lam)
    return DensityField(field.grid, prefactor * total)


def compound_poisson_spectral(field: DensityField, t: float) -> DensityField:
    """Absolutely continuous part of the compound Poisson law by one inversion.

    Inverts e^{t(F nu - M)} - e^{-t M}, the transform of the series without
    its atom at the origin.
    """
    mass = field.mass
    transform = np.exp(t * (forward(field) - mass)) - np.exp(-t * mass)
    return DensityField(field.grid, inverse(transform, field.grid, "compound Poisson"))
