"""Numerical laboratory for heat kernels of Levy-type operators."""

__version__ = "0.1.0"
