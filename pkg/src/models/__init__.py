"""Levy models, their building blocks and assumption diagnostics."""

from .diagnostics import check_condition_B, check_condition_C
from .families import (
    make_compound_poisson,
    make_gaussian,
    make_relativistic,
    make_stable,
    make_tempered,
    model_from_config,
)
from .levy_model import LevyModel
from .profile import ProfileClass, RadialProfile, Verdict, classify_profile
from .sphere import SphericalDensity
from .tilting import tilt

__all__ = [
    "LevyModel",
    "ProfileClass",
    "RadialProfile",
    "SphericalDensity",
    "Verdict",
    "check_condition_B",
    "check_condition_C",
    "classify_profile",
    "make_compound_poisson",
    "make_gaussian",
    "make_relativistic",
    "make_stable",
    "make_tempered",
    "model_from_config",
    "tilt",
]
