"""Heat kernels: spectral inversion, oracles, the jump decomposition and far-field values."""

from .decomposition import ResidualReport, decomposition_check, semigroup_check
from .exponent_grid import GridExponent, grid_exponent
from .far_field import FarFieldEvaluator, FarFieldValue, far_field
from .field import Atom, KernelField
from .oracle import (
    cauchy_kernel,
    gaussian_kernel,
    oracle_density,
    relativistic_bessel,
    relativistic_oracle,
    subordinator_laplace,
)
from .spectral import heat_kernel_spectral, small_jump_kernel

__all__ = [
    "Atom",
    "FarFieldEvaluator",
    "FarFieldValue",
    "GridExponent",
    "KernelField",
    "ResidualReport",
    "cauchy_kernel",
    "decomposition_check",
    "far_field",
    "gaussian_kernel",
    "grid_exponent",
    "heat_kernel_spectral",
    "oracle_density",
    "relativistic_bessel",
    "relativistic_oracle",
    "semigroup_check",
    "small_jump_kernel",
    "subordinator_laplace",
]
