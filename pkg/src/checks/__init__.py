"""Registry of the checks a scenario can run."""

import logging
from typing import Any, Callable, Dict, Optional

from ..core.exceptions import ConfigException
from ..models.levy_model import LevyModel
from .asymptotic_checks import (
    check_compound_ratio,
    check_convolution_ratio,
    check_direction_ratios,
    check_kernel_ratio,
    check_limit_identity,
    check_sandwich,
    check_scaling,
)
from .base import CheckContext, CheckResult, clean
from .convolve_checks import check_convolution_mass, check_factorization
from .kernel_checks import (
    check_compound_series,
    check_decomposition,
    check_far_field,
    check_field_export,
    check_mass,
    check_oracle,
    check_relativistic_oracle,
    check_semigroup,
)
from .model_checks import check_classify, check_condition_b, check_condition_c, check_kfunction
from .symbol_checks import check_condition_d, check_doubling, check_moment, check_psi

logger = logging.getLogger(__name__)

Check = Callable[[Optional[LevyModel], Dict[str, Any], Optional[float], CheckContext], CheckResult]

CHECKS: Dict[str, Check] = {
    "classify": check_classify,
    "condition_b": check_condition_b,
    "condition_c": check_condition_c,
    "condition_d": check_condition_d,
    "kfunction": check_kfunction,
    "psi": check_psi,
    "doubling": check_doubling,
    "moment": check_moment,
    "oracle": check_oracle,
    "mass": check_mass,
    "semigroup": check_semigroup,
    "decomposition": check_decomposition,
    "compound_series": check_compound_series,
    "far_field": check_far_field,
    "relativistic_oracle": check_relativistic_oracle,
    "field_export": check_field_export,
    "convolution_mass": check_convolution_mass,
    "factorization": check_factorization,
    "kernel_ratio": check_kernel_ratio,
    "direction_ratios": check_direction_ratios,
    "convolution_ratio": check_convolution_ratio,
    "compound_ratio": check_compound_ratio,
    "sandwich": check_sandwich,
    "scaling": check_scaling,
    "limit_identity": check_limit_identity,
}


def get_check(check_type: str) -> Check:
    """Look up a check by its type name.

    Raises:
        ConfigException: If the check type is not registered
    """
    check_type = check_type.lower()
    if check_type not in CHECKS:
        available = ", ".join(sorted(CHECKS))
        raise ConfigException(f"Unsupported check type: {check_type}. Available checks: {available}")
    logger.debug(f"Resolved check type: {check_type}")
    return CHECKS[check_type]


__all__ = ["CHECKS", "Check", "CheckContext", "CheckResult", "clean", "get_check"]
