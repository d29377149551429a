"""Predicted far-field limits and the ratio series that test them."""

from .limits import default_directions, default_probe_radii, predicted_limit, probe_radii
from .ratios import (
    compound_ratio_series,
    convolution_limit,
    convolution_ratio_series,
    kernel_ratio_series,
)
from .sandwich import SandwichReport, sandwich_check
from .series import ConvergenceVerdict, RatioSeries, diagnose

__all__ = [
    "ConvergenceVerdict",
    "RatioSeries",
    "SandwichReport",
    "compound_ratio_series",
    "convolution_limit",
    "convolution_ratio_series",
    "default_directions",
    "default_probe_radii",
    "diagnose",
    "kernel_ratio_series",
    "predicted_limit",
    "probe_radii",
    "sandwich_check",
]
