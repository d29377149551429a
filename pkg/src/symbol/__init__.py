"""Fourier-side objects of a Levy model: Phi, psi, Psi, Psi_-, h(t), b_r and psi~."""

from .condition_d import ConditionDReport, check_condition_D
from .exponent import SymbolValue, phi, psi
from .maximal import PsiTable, drift_correction, h_of_t, psi_inverse, psi_max, psi_table
from .moments import exp_moment_exponent, relativistic_moment_exponent

__all__ = [
    "ConditionDReport",
    "PsiTable",
    "SymbolValue",
    "check_condition_D",
    "drift_correction",
    "exp_moment_exponent",
    "h_of_t",
    "phi",
    "psi",
    "psi_inverse",
    "psi_max",
    "psi_table",
    "relativistic_moment_exponent",
]
