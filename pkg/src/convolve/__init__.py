"""Grid machinery: sampled measures, FFT convolutions and pair quadratures."""

from .fourier import forward, inverse
from .grid import DensityField, Grid
from .kfunction import KEstimate, k_function, k_slope, k_table
from .ops import compound_poisson, compound_poisson_spectral, convolve, nfold
from .pairs import pair_integral, radial_pair_integral
from .restricted import RestrictedMeasure, exp_moment_integral, field_exp_moment, sample

__all__ = [
    "DensityField",
    "Grid",
    "KEstimate",
    "RestrictedMeasure",
    "compound_poisson",
    "compound_poisson_spectral",
    "convolve",
    "exp_moment_integral",
    "field_exp_moment",
    "forward",
    "inverse",
    "k_function",
    "k_slope",
    "k_table",
    "nfold",
    "pair_integral",
    "radial_pair_integral",
    "sample",
]
