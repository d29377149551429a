"""Discrete Fourier pairs on a Grid matching F(f)(xi) = int e^{i<xi,x>} f(x) dx."""

import logging

import numpy as np

from .grid import DensityField, Grid

logger = logging.getLogger(__name__)

IMAG_RESIDUE = 1e-9


def _corner_phase(grid: Grid, sign: float) -> np.ndarray:
    phase = np.ones(grid.shape, dtype=complex)
    for xi in grid.frequency_mesh():
        phase = phase * np.exp(sign * 1j * xi * grid.length)
    return phase


def forward(field: DensityField) -> np.ndarray:
    """Lattice transform Delta^d sum_j f_j e^{i<xi_k, x_j>} on the frequency mesh."""
    grid = field.grid
    scale = grid.cell_volume * grid.n**grid.d
    return scale * np.fft.ifftn(field.values) * _corner_phase(grid, -1.0)


def inverse(transform: np.ndarray, grid: Grid, label: str = "field") -> np.ndarray:
    """Samples (2 pi)^{-d} int F(xi) e^{-i<xi,x_j>} dxi on the lattice.

    The imaginary residue is discarded; it is logged when above 1e-9 of the peak.
    """
    values = np.fft.fftn(transform * _corner_phase(grid, 1.0)) / (grid.n * grid.spacing) ** grid.d
    peak = np.abs(values.real).max()
    residue = np.abs(values.imag).max()
    if peak > 0 and residue > IMAG_RESIDUE * peak:
        logger.debug(f"Imaginary residue {residue / peak:.2e} of peak in {label}")
    return values.real
